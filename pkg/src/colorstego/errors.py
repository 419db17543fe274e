"""Exception types and process exit codes shared across the package."""


class StegoError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(StegoError):
    """Invalid parameters, inconsistent dimensions, or malformed inputs."""


class CapacityError(StegoError):
    """The carrier image cannot hold the payload at the requested settings.

    ``required_planes`` is the smallest plane count that would fit the
    payload, or ``None`` if even eight planes are not enough.
    """

    def __init__(self, message: str, required_planes: int | None = None):
        super().__init__(message)
        self.required_planes = required_planes


class KeyfileError(StegoError):
    """Keyfile is malformed: bad magic, version, length, or checksum."""


class TamperedImageError(StegoError):
    """Packaged image bytes do not match the manifest digest."""


class KeyMismatchError(StegoError):
    """Candidate keyfile does not match the manifest key commitment."""


EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_PARAMETER = 2
EXIT_CAPACITY = 3
EXIT_TAMPERED_IMAGE = 4
EXIT_KEY_MISMATCH = 5
EXIT_IO = 6
