"""Exception types raised by the loaders and the pipeline."""

from __future__ import annotations


class FundscapeError(Exception):
    """Base class for every error raised by this package."""


class InputError(FundscapeError):
    """A problem with an input file, optionally tied to a line number."""

    def __init__(self, message: str, *, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        elif line is not None:
            where = f"line {line}: "
        super().__init__(where + message)
        self.detail = message


# corpus
class MalformedRecord(InputError):
    pass


class DuplicateId(InputError):
    pass


class UnknownDocType(InputError):
    pass


class CensusYearBeforePubYear(InputError):
    pass


class EmptyWhitelist(FundscapeError):
    pass


# lexicon
class DuplicateDiseaseId(InputError):
    pass


class EmptyPreferredName(InputError):
    pass


class MalformedRow(InputError):
    pass


# matcher
class EmptyTermSet(FundscapeError):
    pass


class EmptyTerm(FundscapeError):
    pass


# funders
class AliasCollision(InputError):
    def __init__(self, alias: str, first: str, second: str, **kw):
        self.alias = alias
        self.funder_ids = (first, second)
        super().__init__(f"alias {alias!r} maps to both {first} and {second}", **kw)


class DuplicateFunderId(InputError):
    pass


# indicators
class EmptyCorpus(FundscapeError):
    pass


class MissingReferenceCell(FundscapeError):
    pass


class ZeroExpected(FundscapeError):
    pass


class EmptyGroup(FundscapeError):
    pass


class ConfigError(FundscapeError):
    pass
