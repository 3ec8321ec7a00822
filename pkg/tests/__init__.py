# ncclab test suite.
