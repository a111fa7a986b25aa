"""Shared exception classes."""


class K2resError(Exception):
    pass


class InputError(K2resError):
    """Malformed or inconsistent input (parse errors, bad generators, ...)."""


class BoundError(K2resError):
    """A computation needs data beyond the declared degree/step bounds."""
