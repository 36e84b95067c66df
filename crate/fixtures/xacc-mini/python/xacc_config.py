import os

import yaml


def load_config(path=None):
    path = path or os.path.join(os.path.expanduser("~"), ".xacc", "config.yaml")
    with open(path) as f:
        return yaml.load(f)
