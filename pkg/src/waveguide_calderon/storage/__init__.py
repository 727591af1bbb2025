"""Reports, tables and versioned file formats."""

from waveguide_calderon.storage.artifacts import ArtifactStore, format_cell, read_csv
from waveguide_calderon.storage.formats import (
    load_expansion,
    read_mesh,
    save_expansion,
    write_mesh,
)

__all__ = [
    "ArtifactStore",
    "format_cell",
    "load_expansion",
    "read_csv",
    "read_mesh",
    "save_expansion",
    "write_mesh",
]
