"""
Catalog of small groups given as construction expressions.

File format (UTF-8, '#' starts a comment, one entry per line):

    label | order | expression [| gap=(n,i)] [| kset={a,b,c}] [| notes=free text]

The shipped catalog lists every isomorphism type of order 6, 8, 12, 18, 20,
24, 36 and 42. Its completeness rests on the published counts of groups of
small order (EXPECTED_COUNTS); verify_catalog checks consistency with those
counts, orders and pairwise non-isomorphism, but cannot prove completeness.
"""
import multiprocessing
import os
import re
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from tqdm import tqdm

from construction_parser import ConstructionExpr, ExpressionSyntaxError, build, format_expr, parse_expr
from decomposition import KSet, kset
from isomorphism import find_isomorphism, fingerprints
from perm_group import DEFAULT_CAP, Group, is_perfect


EXPECTED_COUNTS: Dict[int, int] = {6: 2, 8: 5, 12: 5, 18: 5, 20: 5, 24: 15, 36: 14, 42: 6}

DEFAULT_CATALOG_PATH = Path(__file__).resolve().parent / "catalog" / "small_groups.cat"

_LABEL_RE = re.compile(r'^[A-Za-z0-9_.\-]+$')
_GAP_RE = re.compile(r'^\(\s*(\d+)\s*,\s*(\d+)\s*\)$')


class CatalogFormatError(ValueError):
    """Raised for malformed catalog text; line and column are 1-based."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        location = ""
        if line is not None:
            location = f"line {line}" + (f", column {column}" if column is not None else "")
            location = f" ({location})"
        super().__init__(f"{message}{location}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class CatalogEntry:
    """One catalog line. The expression is parsed but not built."""
    label: str
    order: int
    expr: ConstructionExpr
    gap_id: Optional[Tuple[int, int]] = None
    expected_kset: Optional[KSet] = None
    notes: str = ""
    line: int = field(default=0, compare=False)


def _split_fields(text: str) -> List[Tuple[str, int]]:
    """Split on '|' outside parentheses; returns (stripped field, 1-based start column)."""
    fields = []
    depth, start = 0, 0
    for i, ch in enumerate(text + '|'):
        if ch == '(':
            depth += 1
        elif ch == ')':
            depth -= 1
        elif ch == '|' and depth <= 0:
            raw = text[start:i]
            offset = len(raw) - len(raw.lstrip())
            fields.append((raw.strip(), start + offset + 1))
            start = i + 1
    return fields


def parse_catalog(text: str) -> List[CatalogEntry]:
    """
    Parse catalog text into entries, in file order.

    Raises:
        CatalogFormatError: For syntax errors, duplicate labels, a missing
            order field or a gap id whose order disagrees
    """
    entries: List[CatalogEntry] = []
    seen: Dict[str, int] = {}
    for line_number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split('#', 1)[0]
        if not content.strip():
            continue
        fields = _split_fields(content)

        label, label_column = fields[0]
        if not _LABEL_RE.match(label):
            raise CatalogFormatError(f"Invalid label {label!r}", line_number, label_column)
        if label in seen:
            raise CatalogFormatError(f"Duplicate label {label!r} (first on line {seen[label]})",
                                     line_number, label_column)
        if len(fields) < 2 or not fields[1][0]:
            raise CatalogFormatError(f"Entry {label!r} has no order field", line_number)
        order_text, order_column = fields[1]
        if not re.fullmatch(r"\d+", order_text, re.ASCII) or int(order_text) < 1:
            raise CatalogFormatError(f"Order must be a positive integer, got {order_text!r}",
                                     line_number, order_column)
        if len(fields) < 3 or not fields[2][0]:
            raise CatalogFormatError(f"Entry {label!r} has no expression", line_number)
        expr_text, expr_column = fields[2]
        try:
            expr = parse_expr(expr_text)
        except ExpressionSyntaxError as e:
            raise CatalogFormatError(e.message, line_number, expr_column + e.column - 1)

        order = int(order_text)
        gap_id, expected, notes = None, None, ""
        for value, column in fields[3:]:
            key, sep, rest = value.partition('=')
            key, rest = key.strip(), rest.strip()
            if not sep:
                raise CatalogFormatError(f"Expected key=value, got {value!r}", line_number, column)
            if key == 'gap':
                match = _GAP_RE.match(rest)
                if not match:
                    raise CatalogFormatError(f"Malformed gap id {rest!r}", line_number, column)
                gap_id = (int(match.group(1)), int(match.group(2)))
                if gap_id[0] != order:
                    raise CatalogFormatError(
                        f"Gap id order {gap_id[0]} disagrees with declared order {order}", line_number, column)
            elif key == 'kset':
                try:
                    expected = KSet.parse(rest)
                except ValueError as e:
                    raise CatalogFormatError(str(e), line_number, column)
            elif key == 'notes':
                notes = rest
            else:
                raise CatalogFormatError(f"Unknown field {key!r}", line_number, column)

        seen[label] = line_number
        entries.append(CatalogEntry(label, order, expr, gap_id, expected, notes, line_number))
    return entries


def format_catalog(entries: Iterable[CatalogEntry]) -> str:
    """Catalog text for entries; parse_catalog(format_catalog(e)) == e."""
    lines = []
    for entry in entries:
        parts = [entry.label, str(entry.order), format_expr(entry.expr)]
        if entry.gap_id:
            parts.append(f"gap=({entry.gap_id[0]},{entry.gap_id[1]})")
        if entry.expected_kset is not None:
            parts.append(f"kset={entry.expected_kset}")
        if entry.notes:
            parts.append(f"notes={entry.notes}")
        lines.append(" | ".join(parts))
    return "\n".join(lines) + ("\n" if lines else "")


def load_catalog(path: Optional[Path] = None) -> List[CatalogEntry]:
    path = Path(path) if path else DEFAULT_CATALOG_PATH
    if not path.exists():
        raise FileNotFoundError(f"Catalog file does not exist: {path}")
    return parse_catalog(path.read_text(encoding="utf-8"))


@dataclass
class BuiltEntry:
    entry: CatalogEntry
    group: Optional[Group] = None
    error: Optional[str] = None
    error_type: Optional[str] = None


def build_entry(entry: CatalogEntry, cap: int = DEFAULT_CAP) -> BuiltEntry:
    """Build one entry; failures are recorded on the result rather than raised."""
    try:
        group = build(entry.expr, cap)
    except ValueError as e:
        return BuiltEntry(entry, error=f"{type(e).__name__}: {e}", error_type=type(e).__name__)
    if group.order != entry.order:
        return BuiltEntry(entry, group, f"order mismatch: declared {entry.order}, built {group.order}")
    return BuiltEntry(entry, group)


def build_entries(entries: Sequence[CatalogEntry], cap: int = DEFAULT_CAP,
                  show_progress: bool = True) -> List[BuiltEntry]:
    iterator = entries
    if show_progress:
        iterator = tqdm(entries, desc="Building groups", unit="groups")
    return [build_entry(entry, cap) for entry in iterator]


def find_isomorphic_pairs(built: Sequence[BuiltEntry], show_progress: bool = True) -> List[Tuple[str, str]]:
    """
    Pairs of labels, within each order, whose groups are isomorphic.

    Fingerprints rule out most pairs before any search.
    """
    by_order: Dict[int, List[BuiltEntry]] = defaultdict(list)
    for item in built:
        if item.error is None:
            by_order[item.group.order].append(item)

    total = sum(len(items) * (len(items) - 1) // 2 for items in by_order.values())
    pbar = tqdm(total=total, desc="Checking isomorphism", unit="pairs") if show_progress else None

    pairs = []
    for order in sorted(by_order):
        items = by_order[order]
        prints = fingerprints([item.group for item in items], show_progress=False)
        for i in range(len(items)):
            for j in range(i + 1, len(items)):
                if prints[i] == prints[j] and find_isomorphism(items[i].group, items[j].group) is not None:
                    pairs.append((items[i].entry.label, items[j].entry.label))
                if pbar:
                    pbar.update(1)
    if pbar:
        pbar.close()
    return pairs


@dataclass
class CatalogIssue:
    kind: str
    labels: Tuple[str, ...]
    message: str


@dataclass
class CatalogReport:
    entry_count: int
    counts: Dict[int, int]
    issues: List[CatalogIssue]
    built: List[BuiltEntry]

    @property
    def ok(self) -> bool:
        return not self.issues


def verify_catalog(entries: Sequence[CatalogEntry], cap: int = DEFAULT_CAP,
                   expected_counts: Optional[Dict[int, int]] = None,
                   show_progress: bool = True) -> CatalogReport:
    """
    Check that every entry builds at its declared order, entries of equal
    order are pairwise non-isomorphic, per-order counts match the expected
    table and declared K-sets match the computed ones.
    """
    expected_counts = EXPECTED_COUNTS if expected_counts is None else expected_counts
    issues: List[CatalogIssue] = []

    labels = defaultdict(int)
    for entry in entries:
        labels[entry.label] += 1
    for label, count in sorted(labels.items()):
        if count > 1:
            issues.append(CatalogIssue("duplicate-label", (label,), f"label {label} used {count} times"))

    built = build_entries(entries, cap, show_progress)
    for item in built:
        if item.error:
            issues.append(CatalogIssue("build", (item.entry.label,), item.error))

    for first, second in find_isomorphic_pairs(built, show_progress):
        issues.append(CatalogIssue("isomorphic", (first, second),
                                   f"{first} and {second} are isomorphic"))

    counts: Dict[int, int] = defaultdict(int)
    for entry in entries:
        counts[entry.order] += 1
    for order in sorted(set(counts) | set(expected_counts)):
        found, wanted = counts.get(order, 0), expected_counts.get(order)
        if wanted is None:
            issues.append(CatalogIssue("count", (), f"order {order} is not a catalogued order ({found} entries)"))
        elif found != wanted:
            issues.append(CatalogIssue("count", (), f"count {found} != {wanted} at order {order}"))

    for item in built:
        if item.error is None and item.entry.expected_kset is not None:
            actual = kset(item.group)
            if actual != item.entry.expected_kset:
                issues.append(CatalogIssue("kset", (item.entry.label,),
                                           f"{item.entry.label}: K = {actual}, expected {item.entry.expected_kset}"))

    return CatalogReport(len(entries), dict(sorted(counts.items())), issues, built)


@dataclass(frozen=True)
class SweepResult:
    """K-set analysis of one catalog entry."""
    label: str
    order: int
    kset: Optional[KSet] = None
    perfect: Optional[bool] = None
    gap_id: Optional[Tuple[int, int]] = None
    error: Optional[str] = None
    error_type: Optional[str] = None

    def matches(self, x: KSet, nonperfect_only: bool = False) -> bool:
        if self.error or self.order == 1:
            return False
        if nonperfect_only and self.perfect:
            return False
        return self.kset == x


def analyze_entry(task: Tuple[CatalogEntry, int]) -> SweepResult:
    """Worker: build one entry and compute its K-set. Top level so it pickles."""
    entry, cap = task
    item = build_entry(entry, cap)
    if item.error:
        return SweepResult(entry.label, entry.order, gap_id=entry.gap_id, error=item.error,
                           error_type=item.error_type)
    return SweepResult(entry.label, entry.order, kset(item.group), is_perfect(item.group), entry.gap_id)


class CatalogSweeper:
    """Computes K-sets over catalog entries, optionally in worker processes."""

    def __init__(self, cap: int = DEFAULT_CAP, workers: Optional[int] = None):
        """
        Args:
            cap: Element cap for every build
            workers: Worker processes; None uses every CPU, 1 runs serially in-process
        """
        self.cap = cap
        self.workers = workers or os.cpu_count() or 1

    def analyze(self, entries: Sequence[CatalogEntry], orders: Optional[Iterable[int]] = None,
                show_progress: bool = True) -> List[SweepResult]:
        """K-set of every entry whose order is in the filter, sorted by label."""
        wanted = set(orders) if orders else None
        tasks = [(entry, self.cap) for entry in entries if wanted is None or entry.order in wanted]

        if self.workers == 1 or len(tasks) < 2:
            iterator = tasks
            if show_progress:
                iterator = tqdm(tasks, desc="Analyzing groups", unit="groups")
            results = [analyze_entry(task) for task in iterator]
        else:
            with multiprocessing.Pool(processes=min(self.workers, len(tasks))) as pool:
                iterator = pool.imap_unordered(analyze_entry, tasks)
                if show_progress:
                    iterator = tqdm(iterator, total=len(tasks), desc="Analyzing groups", unit="groups")
                results = list(iterator)
        return sorted(results, key=lambda r: r.label)

    def sweep(self, entries: Sequence[CatalogEntry], x: KSet, orders: Optional[Iterable[int]] = None,
              nonperfect_only: bool = False, show_progress: bool = True) -> List[SweepResult]:
        """Entries whose K-set equals x; the trivial group never matches."""
        results = self.analyze(entries, orders, show_progress)
        return [r for r in results if r.matches(x, nonperfect_only)]


def sweep_catalog(entries: Sequence[CatalogEntry], x: KSet, orders: Optional[Iterable[int]] = None,
                  nonperfect_only: bool = False, workers: Optional[int] = None,
                  cap: int = DEFAULT_CAP, show_progress: bool = True) -> List[SweepResult]:
    return CatalogSweeper(cap, workers).sweep(entries, x, orders, nonperfect_only, show_progress)
