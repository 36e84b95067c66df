//! Per-line code extraction. Comments are removed, docstring and block
//! comment bodies become blanks, and ordinary string literals are kept
//! intact so call arguments can still be inspected.

use super::LanguageKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Code,
    /// Inside a Python triple-quoted string opened with this quote byte.
    Triple(u8),
    /// Inside a C-style block comment.
    Block,
}

/// Returns the code portion of every line of `text`, in order.
pub fn code_lines(text: &str, kind: LanguageKind) -> Vec<String> {
    let mut state = State::Code;
    text.lines()
        .map(|line| match kind {
            LanguageKind::Python => python_line(line, &mut state),
            LanguageKind::Cpp | LanguageKind::Qasm => c_line(line, &mut state),
            LanguageKind::Other => line.to_string(),
        })
        .collect()
}

fn python_line(line: &str, state: &mut State) -> String {
    let b = line.as_bytes();
    let mut out = b.to_vec();
    let mut i = 0;
    while i < b.len() {
        if let State::Triple(q) = *state {
            let from = i;
            while i < b.len() && !b[i..].starts_with(&[q, q, q]) {
                i += if b[i] == b'\\' { 2 } else { 1 };
            }
            let stop = i.min(b.len());
            out[from..stop].fill(b' ');
            if stop < b.len() {
                *state = State::Code;
                i += 3;
            }
            continue;
        }
        match b[i] {
            b'#' => {
                out.truncate(i);
                break;
            }
            q @ (b'"' | b'\'') if b[i..].starts_with(&[q, q, q]) => {
                *state = State::Triple(q);
                i += 3;
            }
            q @ (b'"' | b'\'') => i = skip_quoted(b, i, q),
            _ => i += 1,
        }
    }
    String::from_utf8(out).expect("only ASCII delimiters bound blanked spans")
}

fn c_line(line: &str, state: &mut State) -> String {
    let b = line.as_bytes();
    let mut out = b.to_vec();
    let mut i = 0;
    while i < b.len() {
        if *state == State::Block {
            let from = i;
            while i < b.len() && !b[i..].starts_with(b"*/") {
                i += 1;
            }
            if i < b.len() {
                *state = State::Code;
                i += 2;
            }
            out[from..i].fill(b' ');
            continue;
        }
        match b[i] {
            b'/' if b.get(i + 1) == Some(&b'/') => {
                out.truncate(i);
                break;
            }
            b'/' if b.get(i + 1) == Some(&b'*') => {
                out[i..i + 2].fill(b' ');
                *state = State::Block;
                i += 2;
            }
            q @ (b'"' | b'\'') => i = skip_quoted(b, i, q),
            _ => i += 1,
        }
    }
    String::from_utf8(out).expect("only ASCII delimiters bound blanked spans")
}

/// Index just past the closing quote, or the line end if unterminated.
fn skip_quoted(b: &[u8], open: usize, q: u8) -> usize {
    let mut i = open + 1;
    while i < b.len() {
        match b[i] {
            b'\\' => i += 2,
            c if c == q => return i + 1,
            _ => i += 1,
        }
    }
    b.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn py(text: &str) -> Vec<String> {
        code_lines(text, LanguageKind::Python)
    }

    fn cpp(text: &str) -> Vec<String> {
        code_lines(text, LanguageKind::Cpp)
    }

    #[test]
    fn python_comment_stripped() {
        assert_eq!(py("x = pickle.load(f)  # unsafe"), ["x = pickle.load(f)  "]);
        assert_eq!(py("# pickle.load(f)"), [""]);
    }

    #[test]
    fn hash_inside_string_is_not_comment() {
        assert_eq!(py("s = '#' + pickle.load(f)"), ["s = '#' + pickle.load(f)"]);
        assert_eq!(py(r##"s = "a\"#b"; t = 1 # c"##), [r##"s = "a\"#b"; t = 1 "##]);
    }

    #[test]
    fn docstring_bodies_are_blank() {
        let lines = py("def f():\n    \"\"\"\n    pickle.load(f)\n    \"\"\"\n    return 1");
        assert_eq!(lines[2].trim(), "");
        assert_eq!(lines[1], "    \"\"\"");
        assert_eq!(lines[3], "    \"\"\"");
        assert_eq!(lines[4], "    return 1");
    }

    #[test]
    fn one_line_docstring() {
        assert_eq!(py("'''eval(x)''' ; eval(y)"), ["'''       ''' ; eval(y)"]);
    }

    #[test]
    fn cpp_comments() {
        assert_eq!(cpp("a = BITS[n]; // BITS[m]"), ["a = BITS[n]; "]);
        let lines = cpp("x /* BITS[n]\n still */ y = 1;\n/* one */ z");
        assert_eq!(lines[0].trim_end(), "x");
        assert_eq!(lines[1], format!("{}y = 1;", " ".repeat(10)));
        assert_eq!(lines[2], format!("{}z", " ".repeat(10)));
        assert_eq!(lines.iter().map(String::len).collect::<Vec<_>>(), [12, 16, 11]);
        assert_eq!(cpp("s = \"//\"; t"), ["s = \"//\"; t"]);
    }

    #[test]
    fn line_count_preserved() {
        let text = "a\n\"\"\"\nb\n\nc\n\"\"\"\nd\n";
        assert_eq!(py(text).len(), text.lines().count());
    }
}
