class SquaresError(Exception):
    pass


class CharacterOutOfAlphabet(SquaresError, ValueError):
    def __init__(self, position, value):
        super().__init__(f"character {value} at position {position} is outside the alphabet")
        self.position = position
        self.value = value


class OutOfBounds(SquaresError, IndexError):
    pass


class BlockTooLong(SquaresError, ValueError):
    pass


class FormatError(SquaresError, ValueError):
    pass


class EmptyPattern(SquaresError, ValueError):
    pass


class TauTooLarge(SquaresError, ValueError):
    pass


class NotNeighboring(SquaresError, ValueError):
    pass


class PeriodMismatch(SquaresError, ValueError):
    pass


class RootMismatch(SquaresError, ValueError):
    pass


class EmptyWindow(SquaresError, ValueError):
    pass


class MissingRepresentation(SquaresError, KeyError):
    pass


class KTooLarge(SquaresError, ValueError):
    def __init__(self, total):
        super().__init__(f"k exceeds the number of distinct squares ({total})")
        self.total = total


class InvalidExponent(SquaresError, ValueError):
    pass


class InputTooLarge(SquaresError, ValueError):
    pass
