import pickle


def load_result(path):
    with open(path, "rb") as f:
        return pickle.load(f)
