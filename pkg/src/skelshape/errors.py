"""Exception hierarchy shared by the whole pipeline."""


class SkelshapeError(Exception):
    """Base class for every error raised by this package."""


class DecodeError(SkelshapeError):
    """Input bytes are not a decodable raster image."""


class EmptyShape(SkelshapeError):
    """The binarized raster contains no foreground pixel."""


class DegenerateSkeleton(SkelshapeError):
    """Skeleton extraction or pruning produced an unusable skeleton."""


class LengthMismatch(SkelshapeError):
    """Sequences passed to a pairwise metric have different lengths."""


class ZeroDenominator(SkelshapeError):
    """A normalized-difference term has a zero denominator."""


class DegenerateVector(SkelshapeError):
    """A direction vector needed for a cosine value is zero."""


class NoCandidate(SkelshapeError):
    """The axis search found no branch incident to the root."""


class EmptyCorrespondence(SkelshapeError):
    """A merge was requested with no matched endpoint pairs."""


class EmptyInput(SkelshapeError):
    """An operation over a shape collection received no shapes."""


class EmptyDataset(SkelshapeError):
    """A dataset directory yielded no usable silhouettes."""


class EmptyGallery(SkelshapeError):
    """Retrieval was asked to rank an empty gallery."""


class DegeneratePairs(SkelshapeError):
    """Transform estimation received coincident source points."""


class InsufficientCorrespondence(SkelshapeError):
    """Shape completion needs at least two matched endpoint pairs."""
