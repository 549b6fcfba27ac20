"""Profile files and directory catalogs.

File format::

    # run_id = zpg_2532
    # re_theta = 2532
    # u_tau = 0.5            (optional: u_inf, u_tau, nu)
    # units = plus           (or ``raw``: columns are y and U in physical units)
    30.0 11.87
    ...

Lines starting with ``#`` that contain ``=`` are header entries; other
``#`` lines are comments.  Body lines hold whitespace- or comma-separated
numbers; ``columns`` picks which two are y and U.  In raw mode the header
must carry ``u_tau`` and ``nu`` and samples are normalized with
``y+ = y u_tau / nu`` and ``U+ = U / u_tau``.
"""

from __future__ import annotations

import logging
import os
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Optional, Sequence, Tuple, Union

import numpy as np

from .core import BLScalingError, ProfileError, VelocityProfile

log = logging.getLogger(__name__)

DATA_DIR_ENV = "BLSCALING_DATA_DIR"
DEFAULT_GLOB = "*.dat"
HEADER_KEYS = ("run_id", "re_theta", "u_inf", "u_tau", "nu", "units")
_FLOAT_KEYS = ("re_theta", "u_inf", "u_tau", "nu")
_SPLIT = re.compile(r"[\s,;]+")


class ParseError(BLScalingError, ValueError):
    def __init__(self, message: str, line: Optional[int] = None, source: Optional[str] = None):
        self.line = line
        self.source = source
        where = ""
        if source:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


def parse_profile(
    text: str,
    *,
    raw: Optional[bool] = None,
    columns: Tuple[int, int] = (0, 1),
    run_id: Optional[str] = None,
    source: Optional[str] = None,
) -> VelocityProfile:
    """Parse one profile file's contents.

    ``raw`` overrides the ``units`` header.  ``run_id`` is used when the
    header has none.
    """
    if not text or not text.strip():
        raise ParseError("empty input", source=source)
    iy, iu = columns
    header: dict[str, str] = {}
    rows: list[tuple[float, float]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s:
            continue
        if s.startswith("#"):
            body = s.lstrip("#").strip()
            if "=" not in body:
                continue
            key, _, value = body.partition("=")
            key = key.strip().lower()
            if key in header:
                raise ParseError(f"duplicate header key {key!r}", lineno, source)
            header[key] = value.strip()
            continue
        fields = [f for f in _SPLIT.split(s) if f]
        try:
            rows.append((float(fields[iy]), float(fields[iu])))
        except (ValueError, IndexError):
            raise ParseError(f"malformed numeric record {s!r}", lineno, source) from None

    meta: dict[str, Optional[float]] = {}
    for key in _FLOAT_KEYS:
        if key in header:
            try:
                meta[key] = float(header[key])
            except ValueError:
                raise ParseError(f"header {key} is not a number: {header[key]!r}", source=source) from None
        else:
            meta[key] = None
    if meta["re_theta"] is None:
        raise ParseError("missing header key re_theta", source=source)

    units = header.get("units", "plus").lower()
    if units not in ("plus", "raw"):
        raise ParseError(f"unknown units {units!r}", source=source)
    is_raw = (units == "raw") if raw is None else raw

    arr = np.array(rows, dtype=float).reshape(-1, 2)
    y, u = arr[:, 0], arr[:, 1]
    if is_raw:
        missing = [k for k in ("u_tau", "nu") if meta[k] is None]
        if missing:
            raise ParseError(f"raw units require header keys {', '.join(missing)}", source=source)
        y = y * meta["u_tau"] / meta["nu"]
        u = u / meta["u_tau"]

    rid = header.get("run_id") or run_id or "profile"
    try:
        return VelocityProfile(
            run_id=rid,
            re_theta=meta["re_theta"],
            y_plus=y,
            u_plus=u,
            u_inf=meta["u_inf"],
            u_tau=meta["u_tau"],
            nu=meta["nu"],
        )
    except ProfileError as exc:
        raise ProfileError(f"{source}: {exc}" if source else str(exc)) from None


def read_profile(path: Union[str, Path], **kwargs) -> VelocityProfile:
    path = Path(path)
    kwargs.setdefault("run_id", path.stem)
    return parse_profile(path.read_text(), source=str(path), **kwargs)


def format_profile(profile: VelocityProfile) -> str:
    """Canonical text form; floats are written with round-trip precision."""
    lines = [f"# run_id = {profile.run_id}", f"# re_theta = {float(profile.re_theta)!r}"]
    for key in ("u_inf", "u_tau", "nu"):
        v = getattr(profile, key)
        if v is not None:
            lines.append(f"# {key} = {float(v)!r}")
    lines.append("# units = plus")
    lines.append("# columns: y_plus u_plus")
    lines.extend(f"{y!r} {u!r}" for y, u in zip(profile.y_plus.tolist(), profile.u_plus.tolist()))
    return "\n".join(lines) + "\n"


def write_profile(profile: VelocityProfile, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(format_profile(profile))
    return path


@dataclass
class Catalog:
    """Profiles parsed from a directory, sorted by Re_theta, plus per-file failures."""

    profiles: list[VelocityProfile]
    failures: list[tuple[str, str]] = field(default_factory=list)

    def __iter__(self) -> Iterator[VelocityProfile]:
        return iter(self.profiles)

    def __len__(self):
        return len(self.profiles)

    def __getitem__(self, i):
        return self.profiles[i]


def sort_profiles(profiles: Sequence[VelocityProfile]) -> list[VelocityProfile]:
    return sorted(profiles, key=lambda p: (p.re_theta, p.run_id))


def load_catalog(
    directory: Union[str, Path, None] = None, pattern: str = DEFAULT_GLOB, **parse_kwargs
) -> Catalog:
    """Parse every file matching ``pattern`` in ``directory``.

    ``directory`` defaults to ``$BLSCALING_DATA_DIR``.  Unparseable files are
    recorded in ``Catalog.failures``; only a catalog with no usable file at
    all is an error.
    """
    if directory is None:
        directory = os.environ.get(DATA_DIR_ENV)
        if not directory:
            raise BLScalingError(f"no directory given and {DATA_DIR_ENV} is unset")
    directory = Path(directory)
    if not directory.is_dir():
        raise BLScalingError(f"{directory} is not a readable directory")
    profiles, failures = [], []
    for path in sorted(directory.glob(pattern)):
        if not path.is_file():
            continue
        try:
            profiles.append(read_profile(path, **parse_kwargs))
        except (BLScalingError, OSError, UnicodeDecodeError) as exc:
            log.warning("skipping %s: %s", path, exc)
            failures.append((str(path), str(exc)))
    if not profiles:
        raise BLScalingError(f"no parseable profile files matching {pattern!r} in {directory}")
    return Catalog(sort_profiles(profiles), failures)
