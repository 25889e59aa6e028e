"""Domain errors. Each carries a short ``kind`` tag used by the CLI."""


class PartcatError(Exception):
    kind = "Error"


class ParseError(PartcatError):
    kind = "SyntaxError"

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class InvalidBlocks(PartcatError):
    kind = "InvalidBlocks"


class ExtraSingletonInBlock(PartcatError):
    kind = "ExtraSingletonInBlock"


class MixedRegime(PartcatError):
    kind = "MixedRegime"


class SignatureMismatch(PartcatError):
    kind = "SignatureMismatch"


class UnknownGenerator(PartcatError):
    kind = "UnknownGenerator"


class BadParam(PartcatError):
    kind = "BadParam"


class OddLength(PartcatError):
    kind = "OddLength"


class WrongRegime(PartcatError):
    kind = "WrongRegime"


class ArityMismatch(PartcatError):
    kind = "ArityMismatch"


class ContextMismatch(PartcatError):
    kind = "ContextMismatch"


class BlockTooLarge(PartcatError):
    kind = "BlockTooLarge"


class MissingName(PartcatError):
    kind = "MissingName"


class BudgetTooSmall(PartcatError):
    kind = "BudgetTooSmall"


class BoundMismatch(PartcatError):
    kind = "BoundMismatch"
