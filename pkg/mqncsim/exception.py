# -*- coding: utf-8 -*-

# Copyright (c) mqncsim Development Team.
# Distributed under the terms of the Modified BSD License.

__all__ = ["QnetError", "WidthError", "EmbeddingError", "ConfigError", "OutcomeError", "ExperimentFailure"]


class QnetError(Exception):
    """Error whose payload is a dict with a human readable "message" and a
    "debugVars" dict of the values that led to it.
    """

    def __init__(self, message, **debugVars):
        super().__init__(dict((("message", message), ("debugVars", debugVars))))

    @property
    def message(self):
        return self.args[0]["message"]

    @property
    def debugVars(self):
        return self.args[0]["debugVars"]

    def __str__(self):
        extra = ", ".join(f"{key}: {val}" for key, val in self.debugVars.items())
        return "\n".join((self.message, extra)) if extra else self.message


class WidthError(QnetError):
    pass


class EmbeddingError(QnetError):
    def __init__(self, message, report=None, **debugVars):
        super().__init__(message, **debugVars)
        self.report = report


class ConfigError(QnetError):
    pass


class OutcomeError(QnetError):
    pass


class ExperimentFailure(Exception):
    """Raised by the manager layer once an error has been logged. `code` is the
    process exit status, `payload` the logged error dict.
    """

    def __init__(self, code, payload):
        super().__init__(code, payload)
        self.code = code
        self.payload = payload
