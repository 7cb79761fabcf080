"""Rendering for diracps run directories.

Consumes only the documented on-disk formats (meta.json, binary field
dumps with JSON sidecars, observables.csv, particles.csv); never imports
the solver package.  All operations are read-only on run directories.
"""

from .errors import SchemaError
from .render import render_observables, render_phase_space

__version__ = "0.1.0"
