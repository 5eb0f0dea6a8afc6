"""Exception hierarchy shared by all kurdcorpus modules."""


class KurdCorpusError(Exception):
    """Base class for every data error raised by the toolkit."""


class LabelError(KurdCorpusError, ValueError):
    pass


class MalformedRecord(KurdCorpusError):
    def __init__(self, line, reason, path=None):
        self.line = line
        self.reason = reason
        self.path = path
        where = f"{path}:{line}" if path else f"line {line}"
        super().__init__(f"{where}: {reason}")


class CorpusWriteError(KurdCorpusError):
    def __init__(self, index, cause):
        self.index = index
        super().__init__(f"failed writing record {index}: {cause}")


class EmptyExtraction(KurdCorpusError):
    pass


class InsufficientData(KurdCorpusError):
    def __init__(self, label, available, required):
        self.label = label
        self.available = available
        self.required = required
        super().__init__(
            f"label {label} has {available} usable sentences, {required} required"
        )


class TableError(KurdCorpusError):
    pass


class EmptyCorpus(KurdCorpusError):
    pass


class EmptyInput(KurdCorpusError):
    pass


class RangeTooSmall(KurdCorpusError):
    pass


class DegenerateLabels(KurdCorpusError):
    pass


class NonFiniteLoss(KurdCorpusError):
    def __init__(self, step, loss):
        self.step = step
        self.loss = loss
        super().__init__(f"non-finite loss {loss!r} at step {step}")


class MissingScript(LabelError):
    pass


class SchemeMismatch(KurdCorpusError):
    pass


class UnparseableLabel(KurdCorpusError):
    def __init__(self, row, value):
        self.row = row
        self.value = value
        super().__init__(f"row {row}: cannot parse label {value!r}")


class ModelFormatError(KurdCorpusError):
    pass


class ConfigError(KurdCorpusError):
    pass
