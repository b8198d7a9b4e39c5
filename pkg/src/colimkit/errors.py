"""Exception hierarchy shared by every engine module."""


class ColimkitError(Exception):
    """Base class; anything raised on purpose by colimkit derives from this."""


# cat-core
class NonComposable(ColimkitError):
    pass


class InvalidPath(ColimkitError):
    pass


class NotParallel(ColimkitError):
    pass


class CornerMismatch(ColimkitError):
    pass


class MalformedTable(ColimkitError):
    pass


class InvalidPresentation(ColimkitError):
    pass


# colimit engine
class StructuralMismatch(ColimkitError):
    pass


class NonCommutingCocone(ColimkitError):
    def __init__(self, message, witnesses=()):
        super().__init__(message)
        self.witnesses = list(witnesses)


class SearchSpaceTooLarge(ColimkitError):
    pass


class InvalidPoset(ColimkitError):
    pass


class NotInCarrier(ColimkitError):
    pass


class NoJoin(ColimkitError):
    pass


# double algebra
class EdgeMismatch(ColimkitError):
    pass


class NonThinCell(ColimkitError):
    pass


class InvalidGrid(ColimkitError):
    pass


class NonComposableCube(ColimkitError):
    pass


# relay simulation
class UnreachableReceiver(ColimkitError):
    pass


class MissingPart(ColimkitError):
    pass


class DuplicateIndex(ColimkitError):
    pass


class InconsistentTotal(ColimkitError):
    pass


# dsl / cli
class DslSyntaxError(ColimkitError):
    def __init__(self, message, line, column):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class SemanticError(ColimkitError):
    pass


class UnknownCommand(ColimkitError):
    pass
