"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Bad input values or an invariant that would be violated."""


class LoadError(Exception):
    """A file could not be read or parsed."""

    def __init__(self, message, path=None, line_no=None):
        self.path = path
        self.line_no = line_no
        where = ""
        if path is not None:
            where = f"{path}"
            if line_no is not None:
                where += f":{line_no}"
            where += ": "
        super().__init__(where + message)


class OOVError(KeyError):
    """A word is missing from the embedding store."""

    def __str__(self):
        return f"out of vocabulary: {self.args[0]!r}"


class DegenerateVectorError(ValueError):
    """A zero-norm vector was used for cosine similarity."""


class PipelineError(RuntimeError):
    """The post-processing pipeline was invoked without its models."""
