use std::io::IsTerminal;

fn main() {
    let color = std::io::stdout().is_terminal();
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr().lock();
    let code = qai_cli::run_with_color(std::env::args_os(), &mut stdout, &mut stderr, color);
    drop(stdout);
    std::process::exit(code);
}
