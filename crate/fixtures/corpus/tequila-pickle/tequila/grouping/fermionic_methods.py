import pickle

import numpy as np


def load_initial_state(filename):
    with open(filename, "rb") as file:
        INIT = pickle.load(file)
        h_ferm = pickle.load(file)
    return INIT, h_ferm


def load_covariance(filename):
    with open(filename, "rb") as file:
        cov = pickle.load(file)
    return np.asarray(cov)


def load_fermionic_ops(filename):
    with open(filename, "rb") as file:
        ops = pickle.load(file)
        coeffs = pickle.load(file)
    return ops, coeffs


def load_optimization_vectors(prefix):
    with open(prefix + "_x.pkl", "rb") as fx:
        x = pickle.load(fx)
    with open(prefix + "_g.pkl", "rb") as fg:
        g = pickle.load(fg)
    return x, g


def load_measurement_groups(filename):
    # Objects loaded: fermionic operators serialized with pickle.load(file)
    with open(filename, "rb") as file:
        groups = pickle.load(file)
        weights = pickle.load(file)
        variances = pickle.load(file)
    return groups, weights, variances
