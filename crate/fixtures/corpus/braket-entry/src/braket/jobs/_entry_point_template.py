import os

import dill


def run_entry_point(job_args_path=None):
    job_args_path = job_args_path or os.environ["AMZN_BRAKET_JOB_ARGS"]
    job_args = dill.load(open(job_args_path, "rb"))
    return job_args["entry_point"](*job_args["args"], **job_args["kwargs"])
