"""Adapter that fills an entityswitch audit manifest with model predictions."""
from .errors import LengthMismatch, RunnerError
from .manifest import Manifest, ManifestEntry, read_manifest
from .models import build_tag_map, emit_tags
from .runner import STUB_ECHO, RunnerConfig, RunReport, run

__version__ = "0.1.0"
