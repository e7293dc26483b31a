"""Run cache and report serialization.

Cached runs live one directory per variant, file names encoding (p, N,
format version); the payload is b-file text, so cached runs are
human-inspectable and directly comparable with OEIS data.  A JSON manifest
alongside each payload carries creation parameters and a sha256 checksum.
Writes go to a temporary file then rename, so a crashed sweep never leaves
a truncated entry observable.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import re
import warnings
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .analysis import ClassificationReport, SweepReport, percent
from .engine import NO_ZERO, STANDARD, SequenceRun, SequenceSpec, TermRecord
from .numtheory import q_value
from .oeis import parse_bfile

FORMAT_VERSION = 1


class CacheIntegrityError(Exception):
    """Cached payload does not match its manifest checksum."""


@dataclass(frozen=True, slots=True)
class CacheKey:
    variant: str
    p: int | None
    term_count: int
    format_version: int

    @classmethod
    def for_spec(cls, spec: SequenceSpec) -> "CacheKey":
        return cls(spec.variant, spec.p, spec.term_count, FORMAT_VERSION)

    def stem(self) -> str:
        if self.variant == STANDARD:
            return f"p{self.p}_n{self.term_count}_v{self.format_version}"
        return f"n{self.term_count}_v{self.format_version}"


@dataclass(frozen=True, slots=True)
class CacheEntry:
    key: CacheKey
    payload_path: Path
    manifest: dict


def _paths(key: CacheKey, cache_dir: str | os.PathLike) -> tuple[Path, Path]:
    base = Path(cache_dir) / key.variant / key.stem()
    return base.with_suffix(".bfile.txt"), base.with_suffix(".manifest.json")


def _write_atomic(path: Path, data: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(data, encoding="utf-8")
    os.replace(tmp, path)


def save_run(run: SequenceRun, cache_dir: str | os.PathLike) -> CacheEntry:
    """Persist a run; the payload is the b-file serialization of its
    a-values (offset 1)."""
    from . import __version__

    key = CacheKey.for_spec(run.spec)
    payload = "".join(f"{t.n} {t.a}\n" for t in run.terms)
    manifest = {
        "variant": run.spec.variant,
        "p": run.spec.p,
        "term_count": run.spec.term_count,
        "format_version": FORMAT_VERSION,
        "engine_version": __version__,
        "sha256": hashlib.sha256(payload.encode("utf-8")).hexdigest(),
        "created_at": datetime.now(timezone.utc).isoformat(),
    }
    payload_path, manifest_path = _paths(key, cache_dir)
    payload_path.parent.mkdir(parents=True, exist_ok=True)
    _write_atomic(payload_path, payload)
    _write_atomic(manifest_path, json.dumps(manifest, indent=2) + "\n")
    return CacheEntry(key, payload_path, manifest)


def _rebuild_run(spec: SequenceSpec, a_values: list[int]) -> SequenceRun:
    """Reconstruct full term records from cached a-values: q comes from the
    variant formula, flags from the a-values themselves."""
    terms = []
    for n, a in enumerate(a_values, start=1):
        q = q_value(1, n + 1).value if spec.variant == NO_ZERO else q_value(spec.p or 1, n).value
        terms.append(
            TermRecord(
                n=n,
                q=q,
                a=a,
                is_fixed_point=(a == n),
                is_near_match=(a == n - 1),
                is_bootstrap_duplicate=(n == 2 and a == 1 and spec.has_bootstrap),
            )
        )
    return SequenceRun(spec, tuple(terms), frozenset(a_values))


def _load_entry(key: CacheKey, cache_dir: str | os.PathLike) -> list[int] | None:
    payload_path, manifest_path = _paths(key, cache_dir)
    if not payload_path.exists() or not manifest_path.exists():
        return None
    payload = payload_path.read_text(encoding="utf-8")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    digest = hashlib.sha256(payload.encode("utf-8")).hexdigest()
    if digest != manifest.get("sha256"):
        warnings.warn(
            f"cache entry {payload_path} failed its checksum; treating as absent",
            stacklevel=3,
        )
        return None
    bfile = parse_bfile(payload)
    return [value for _, value in bfile.entries]


_STANDARD_STEM = re.compile(r"p(\d+)_n(\d+)_v(\d+)\.bfile\.txt")
_PLAIN_STEM = re.compile(r"n(\d+)_v(\d+)\.bfile\.txt")


def _longer_candidates(spec: SequenceSpec, cache_dir: str | os.PathLike) -> list[int]:
    """Term counts of cached entries for the same sequence with at least
    spec.term_count terms (prefix stability lets them supersede)."""
    variant_dir = Path(cache_dir) / spec.variant
    if not variant_dir.is_dir():
        return []
    counts = []
    for name in os.listdir(variant_dir):
        if spec.variant == STANDARD:
            m = _STANDARD_STEM.fullmatch(name)
            if m and int(m.group(1)) == spec.p and int(m.group(3)) == FORMAT_VERSION:
                counts.append(int(m.group(2)))
        else:
            m = _PLAIN_STEM.fullmatch(name)
            if m and int(m.group(2)) == FORMAT_VERSION:
                counts.append(int(m.group(1)))
    return sorted(c for c in counts if c >= spec.term_count)


def load_run(spec: SequenceSpec, cache_dir: str | os.PathLike) -> SequenceRun | None:
    """Load a cached run for ``spec``, or None.  A longer cached run of the
    same sequence is truncated to term_count (the greedy rule has no
    lookahead, so prefixes are stable)."""
    for count in _longer_candidates(spec, cache_dir):
        key = CacheKey(spec.variant, spec.p, count, FORMAT_VERSION)
        a_values = _load_entry(key, cache_dir)
        if a_values is not None:
            return _rebuild_run(spec, a_values[: spec.term_count])
    return None


# ---------------------------------------------------------------------------
# Report serialization


def report_to_json(report: ClassificationReport) -> str:
    """JSON mirror of ClassificationReport, field for field.  Rates are
    emitted as floats; the integer counts alongside stay exact."""
    doc = {
        "spec": {
            "variant": report.spec.variant,
            "term_count": report.spec.term_count,
            "p": report.spec.p,
        },
        "n_limit": report.n_limit,
        "excluded_primes": list(report.excluded_primes),
        "detected": report.detected,
        "near_matches": report.near_matches,
        "total_eligible_primes": report.total_eligible_primes,
        "success_rate": float(report.success_rate),
        "false_negatives": report.false_negatives,
        "total_nonprimes": report.total_nonprimes,
        "false_negative_rate": float(report.false_negative_rate),
        "missed_primes": list(report.missed_primes),
        "false_negative_values": list(report.false_negative_values),
    }
    return json.dumps(doc, indent=2) + "\n"


def _csv_text(rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


def export_table2(sweep: SweepReport) -> str:
    """Success-rate table: matches, near matches, eligible-prime totals and
    the two-decimal percentage row, one column per p."""
    header = ["row"] + [f"p={p}" for p in sweep.p_list]
    if not sweep.p_list:
        return _csv_text([header])
    rows = [
        header,
        ["A) matches n=a(n)"] + [str(r.detected) for r in sweep.reports],
        ["B) matches n=a(n+1)"] + [str(r.near_matches) for r in sweep.reports],
        ["C) total primes"] + [str(r.total_eligible_primes) for r in sweep.reports],
        ["success rate (A/C)"] + [percent(r.success_rate) for r in sweep.reports],
    ]
    return _csv_text(rows)


def export_table3(sweep: SweepReport) -> str:
    """False-negative table: counts, nonprime totals, percentage row."""
    header = ["row"] + [f"p={p}" for p in sweep.p_list]
    if not sweep.p_list:
        return _csv_text([header])
    rows = [
        header,
        ["A) false negatives"] + [str(r.false_negatives) for r in sweep.reports],
        ["B) total nonprimes"] + [str(r.total_nonprimes) for r in sweep.reports],
        ["% (A/B)"] + [percent(r.false_negative_rate) for r in sweep.reports],
    ]
    return _csv_text(rows)


def export_figure2(sweep: SweepReport) -> str:
    """(p, success rate in percent) pairs, plot-ready."""
    rows = [["p", "success_rate_percent"]]
    for p, rate in sweep.figure2_series:
        rows.append([str(p), percent(rate).rstrip("%")])
    return _csv_text(rows)
