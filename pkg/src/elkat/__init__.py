"""elkat: reasoning and learning-protocol toolkit for the epistemic
description logic ELK."""

from .kernels import BACKEND as kernel_backend

__version__ = "0.1.0"
