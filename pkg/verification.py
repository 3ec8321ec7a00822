"""
End-to-end verification: catalog integrity, the {1,2,3} sweep over the
catalogued orders, the closed-form K-set oracles, the order 20 and order 24
instantiations and the 2-/3-decomposable property suites.
"""
import json
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple

from tqdm import tqdm

from group_catalog import CatalogEntry, CatalogReport, CatalogSweeper, SweepResult, verify_catalog
from group_constructors import (
    PRESENTATION_U, PRESENTATION_V, cyclic, dicyclic, dihedral, satisfies_presentation,
    semidirect_product, smallgroup_20_3, smallgroup_24_3, symmetric,
)
from decomposition import (
    KSet, abelian_kset, dihedral_kset, frobenius_identity_check,
    jing_property_check, kset, ncc, pq_kset, proper_normal_subgroups, quaternion_kset,
    shi_property_check,
)
from isomorphism import are_isomorphic
from perm_group import DEFAULT_CAP, Group, is_solvable, quotient_order


THEOREM_X = KSet((1, 2, 3))
SWEEP_ORDERS = (6, 8, 12, 18, 20, 24, 36, 42)
EMPTY_ORDERS = (12, 18, 36, 42)
PQ_PAIRS = ((5, 2), (7, 2), (7, 3), (11, 2), (13, 3))


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class VerificationReport:
    x: KSet
    checks: List[CheckResult] = field(default_factory=list)
    matches: List[SweepResult] = field(default_factory=list)
    summary: str = ""
    timestamp: str = field(default_factory=lambda: datetime.now().isoformat())

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> List[CheckResult]:
        return [check for check in self.checks if not check.passed]

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(CheckResult(name, bool(passed), detail))


def theorem_groups(cap: int = DEFAULT_CAP) -> List[Tuple[str, Group]]:
    return [
        ("Z6", cyclic(6, cap)),
        ("D8", dihedral(4, cap)),
        ("Q8", dicyclic(2, cap)),
        ("S4", symmetric(4, cap)),
        ("SmallGroup(20,3)", smallgroup_20_3(cap)),
        ("SmallGroup(24,3)", smallgroup_24_3(cap)),
    ]


def pq_group(p: int, q: int, cap: int = DEFAULT_CAP) -> Group:
    """Zp x| Zq with the generator of Zq acting by an element of order q mod p."""
    r = next(r for r in range(2, p) if pow(r, q, p) == 1)
    return semidirect_product(cyclic(p, cap), cyclic(q, cap), [[((0, r),)]], cap)


def _check_catalog(report: VerificationReport, catalog: CatalogReport) -> None:
    for issue in catalog.issues:
        labels = f" [{', '.join(issue.labels)}]" if issue.labels else ""
        report.add(f"catalog {issue.kind}{labels}", False, issue.message)
    if catalog.ok:
        counts = ", ".join(f"{order}:{count}" for order, count in catalog.counts.items())
        report.add("catalog integrity", True, f"{catalog.entry_count} entries ({counts})")


def _check_theorem(report: VerificationReport, built: dict, cap: int) -> None:
    found, extras = [], []
    targets = theorem_groups(cap)
    claimed = {name: [] for name, _ in targets}
    for match in report.matches:
        group = built.get(match.label)
        if group is None:
            extras.append(match.label)
            continue
        names = [name for name, target in targets if target.order == group.order and are_isomorphic(group, target)]
        if names:
            claimed[names[0]].append(match.label)
        else:
            extras.append(match.label)

    for name, labels in claimed.items():
        if len(labels) == 1:
            found.append(name)
            report.add(f"theorem group {name}", True, labels[0])
        else:
            report.add(f"theorem group {name}", False, f"matched by {labels or 'nothing'}")
    for label in extras:
        report.add("theorem extras", False, f"{label} is {{1,2,3}}-decomposable but not a theorem group")
    report.summary = f"{len(found)}/{len(targets)} theorem groups, {len(extras)} extras"

    for order in EMPTY_ORDERS:
        at_order = [m.label for m in report.matches if m.order == order]
        report.add(f"no {{1,2,3}}-decomposable group of order {order}", not at_order, ", ".join(at_order))

    unsolvable = [m.label for m in report.matches if m.label in built and not is_solvable(built[m.label])]
    report.add("result groups solvable", not unsolvable, ", ".join(unsolvable))


def _check_oracle(report: VerificationReport, name: str, cases: Sequence[Tuple[str, Callable[[], Group], KSet]],
                  show_progress: bool) -> None:
    bad = []
    iterator = cases
    if show_progress:
        iterator = tqdm(cases, desc=name, unit="groups", leave=False)
    for label, make, expected in iterator:
        actual = kset(make())
        if actual != expected:
            bad.append(f"{label}: {actual} != {expected}")
    report.add(name, not bad, "; ".join(bad) if bad else f"{len(cases)} groups")


def _check_oracles(report: VerificationReport, built: dict, cap: int, show_progress: bool) -> None:
    abelian = [(label, (lambda g=g: g), abelian_kset(g.order)) for label, g in sorted(built.items()) if g.is_abelian]
    abelian += [(f"C {n}", (lambda n=n: cyclic(n, cap)), abelian_kset(n)) for n in range(2, 61)]
    _check_oracle(report, "abelian K-set oracle", abelian, show_progress)

    _check_oracle(report, "dihedral K-set oracle",
                  [(f"D {n}", (lambda n=n: dihedral(n, cap)), dihedral_kset(n)) for n in range(3, 21)],
                  show_progress)
    _check_oracle(report, "dicyclic K-set oracle",
                  [(f"Q {n}", (lambda n=n: dicyclic(n, cap)), quaternion_kset(n)) for n in range(2, 13)],
                  show_progress)
    bad_classes = [n for n in range(2, 13) if len(dicyclic(n, cap).conjugacy_classes) != n + 3]
    report.add("dicyclic class count n+3", not bad_classes, f"fails for n in {bad_classes}" if bad_classes else "")
    _check_oracle(report, "pq K-set oracle",
                  [(f"{p}x|{q}", (lambda p=p, q=q: pq_group(p, q, cap)), pq_kset(p, q)) for p, q in PQ_PAIRS],
                  show_progress)


def _check_order_20(report: VerificationReport, cap: int) -> None:
    g = smallgroup_20_3(cap)
    middle = [n for n in proper_normal_subgroups(g) if not n.is_trivial()]
    shape = [(n.order, ncc(g, n)) for n in middle]
    derived = g.derived_subgroup.order
    ok = (g.center.is_trivial() and shape == [(5, 2), (10, 3)]
          and g.order == derived * (derived - 1) and satisfies_presentation(g, PRESENTATION_V))
    report.add("SmallGroup(20,3) structure", ok,
               f"center {g.center.order}, normal (order, ncc) {shape}, |G'| = {derived}")


def _check_order_24(report: VerificationReport, cap: int) -> None:
    g = smallgroup_24_3(cap)
    orders = [n.order for n in g.normal_subgroups]
    by_order = {n.order: ncc(g, n) for n in proper_normal_subgroups(g)}
    central_quotient = quotient_order(g, g.center)
    ok = (orders == [1, 2, 8, 24] and by_order.get(2) == 2 and by_order.get(8) == 3
          and central_quotient == 12 and satisfies_presentation(g, PRESENTATION_U))
    report.add("SmallGroup(24,3) structure", ok,
               f"normal orders {orders}, ncc {by_order}, |G/Z| = {central_quotient}")


def _check_property_suites(report: VerificationReport, built: dict) -> None:
    for check, name in ((shi_property_check, "2-decomposable properties"),
                        (jing_property_check, "3-decomposable properties"),
                        (frobenius_identity_check, "Frobenius identity")):
        failures, applied = [], 0
        for label, group in sorted(built.items()):
            result = check(group)
            if result.applicable and result.checks:
                applied += 1
            failures.extend(f"{label} |N|={f.subgroup_order}: {f.assertion}" for f in result.failures())
        report.add(name, not failures, "; ".join(failures) if failures else f"{applied} groups with cases")


def run_verification(entries: Sequence[CatalogEntry], x: KSet = THEOREM_X, workers: Optional[int] = None,
                     cap: int = DEFAULT_CAP, show_progress: bool = True) -> VerificationReport:
    """
    Run every check and collect PASS/FAIL results.

    The theorem match, empty-order and solvability checks only run for the
    default X = {1,2,3}; for any other X the sweep result is reported as is.
    """
    report = VerificationReport(x)

    catalog = verify_catalog(entries, cap, show_progress=show_progress)
    _check_catalog(report, catalog)
    built = {item.entry.label: item.group for item in catalog.built if item.error is None}

    results = CatalogSweeper(cap, workers).analyze(entries, SWEEP_ORDERS, show_progress)
    errors = [f"{r.label}: {r.error}" for r in results if r.error]
    report.add("sweep", not errors, "; ".join(errors) if errors else f"{len(results)} groups analyzed")
    report.matches = [r for r in results if r.matches(x, nonperfect_only=True)]

    if x == THEOREM_X:
        _check_theorem(report, built, cap)
    else:
        labels = ", ".join(m.label for m in report.matches) or "none"
        report.summary = f"X = {x}: {len(report.matches)} groups found ({labels})"

    _check_oracles(report, built, cap, show_progress)
    _check_order_20(report, cap)
    _check_order_24(report, cap)
    _check_property_suites(report, built)
    return report


def print_report(report: VerificationReport, quiet: bool = False) -> None:
    """PASS/FAIL line per check, then the summary. Quiet mode prints failures and the summary only."""
    for check in report.checks:
        if quiet and check.passed:
            continue
        status = "PASS" if check.passed else "FAIL"
        detail = f" - {check.detail}" if check.detail else ""
        print(f"{status} {check.name}{detail}")
    passed = sum(1 for check in report.checks if check.passed)
    print(f"{report.summary}; {passed}/{len(report.checks)} checks passed")


def save_report(report: VerificationReport, report_path: Optional[Path] = None) -> Path:
    """
    Save the verification report as JSON.

    Args:
        report: Report to save
        report_path: Target path; defaults to a timestamped file in the working directory

    Returns:
        Path the report was written to
    """
    if not report_path:
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        report_path = Path(f"ncclab_verify_{timestamp}.json")
    report_path = Path(report_path)

    report_data = {
        'summary': {
            'x': list(report.x.values),
            'passed': report.passed,
            'checks_passed': sum(1 for check in report.checks if check.passed),
            'checks_total': len(report.checks),
            'text': report.summary,
            'timestamp': report.timestamp,
        },
        'matches': [
            {
                'label': match.label,
                'order': match.order,
                'kset': list(match.kset.values) if match.kset else None,
                'gap_id': list(match.gap_id) if match.gap_id else None,
            }
            for match in report.matches
        ],
        'checks': [
            {'name': check.name, 'passed': check.passed, 'detail': check.detail}
            for check in report.checks
        ],
    }
    with open(report_path, 'w') as f:
        json.dump(report_data, f, indent=2)
    return report_path
