"""
Class decomposition of normal subgroups.

ncc(N) is the number of conjugacy classes of G whose union is the normal
subgroup N. K_G collects ncc(N) over the proper normal subgroups of G (the
trivial subgroup included, G excluded) and G is X-decomposable when K_G = X.

For a normal subgroup, counting the classes of G contained in N is the same
as counting the fused images of N's own classes, so no fusion map is built.
"""
import json
from dataclasses import asdict, dataclass, field
from typing import Iterable, Iterator, List, Optional, Tuple

from sympy import divisors, isprime, primefactors

from perm_group import (
    ConjugacyClass, Group, Subgroup, is_perfect, is_prime_power, maximal_normal_p_subgroup,
)


@dataclass(frozen=True)
class KSet:
    """Strictly increasing tuple of positive integers."""
    values: Tuple[int, ...] = ()

    def __post_init__(self):
        if any(v < 1 for v in self.values):
            raise ValueError(f"K-set values must be positive: {self.values}")
        if any(a >= b for a, b in zip(self.values, self.values[1:])):
            raise ValueError(f"K-set values must be strictly increasing: {self.values}")

    @classmethod
    def of(cls, values: Iterable[int]) -> 'KSet':
        return cls(tuple(sorted(set(int(v) for v in values))))

    @classmethod
    def parse(cls, text: str) -> 'KSet':
        """Parse "{1,2,3}" or "1,2,3"; duplicates are rejected."""
        body = text.strip()
        if body.startswith('{') and body.endswith('}'):
            body = body[1:-1]
        parts = [part.strip() for part in body.split(',') if part.strip()]
        try:
            values = [int(part) for part in parts]
        except ValueError:
            raise ValueError(f"K-set entries must be integers: {text!r}")
        if len(set(values)) != len(values):
            raise ValueError(f"K-set entries must be distinct: {text!r}")
        return cls.of(values)

    def __iter__(self) -> Iterator[int]:
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __contains__(self, value: int) -> bool:
        return value in self.values

    def __str__(self) -> str:
        return "{" + ",".join(str(v) for v in self.values) + "}"


def proper_normal_subgroups(group: Group) -> List[Subgroup]:
    return [n for n in group.normal_subgroups if not n.is_whole()]


def classes_in(group: Group, normal: Subgroup) -> List[ConjugacyClass]:
    """Conjugacy classes of the group contained in a normal subgroup."""
    return [c for c in group.conjugacy_classes if c.members & ~normal.members == 0]


def ncc(group: Group, normal: Subgroup) -> int:
    """
    Number of conjugacy classes of the group making up a normal subgroup.

    Raises:
        ValueError: If the subgroup is not normal
    """
    if normal.parent is not group:
        raise ValueError("Subgroup belongs to a different group")
    if not normal.is_normal():
        raise ValueError(f"ncc needs a normal subgroup; got a non-normal subgroup of order {normal.order}")
    return len(classes_in(group, normal))


def kset(group: Group) -> KSet:
    """K_G; empty for the trivial group."""
    return KSet.of(ncc(group, n) for n in proper_normal_subgroups(group))


def is_x_decomposable(group: Group, x: Iterable[int]) -> bool:
    return kset(group) == KSet.of(x)


def find_n_decomposable(group: Group, n: int) -> List[Subgroup]:
    return [sub for sub in proper_normal_subgroups(group) if ncc(group, sub) == n]


def abelian_kset(n: int) -> KSet:
    """K-set of any abelian group of order n: the divisors of n other than n."""
    if n < 1:
        raise ValueError(f"Group order must be positive, got {n}")
    return KSet.of(d for d in divisors(n) if d != n)


def pq_kset(p: int, q: int) -> KSet:
    """K-set of the nonabelian group of order pq."""
    if not (isprime(p) and isprime(q)):
        raise ValueError(f"Both parameters must be prime, got p={p}, q={q}")
    if p <= q or (p - 1) % q:
        raise ValueError(f"A nonabelian group of order pq needs p > q and q | p-1, got p={p}, q={q}")
    return KSet.of([1, 1 + (p - 1) // q])


def dihedral_kset(n: int) -> KSet:
    """K-set of the dihedral group of order 2n."""
    if n < 3:
        raise ValueError(f"Dihedral K-set formula needs n >= 3, got {n}")
    odd = {(d + 1) // 2 for d in divisors(n) if d % 2}
    if n % 2:
        return KSet.of(odd)
    even = {(d + 2) // 2 for d in divisors(n) if d % 2 == 0}
    extra = n // 4 + 2 if n % 4 == 0 else (n + 6) // 4
    return KSet.of(odd | even | {extra})


def quaternion_kset(n: int) -> KSet:
    """K-set of the dicyclic group of order 4n."""
    if n < 2:
        raise ValueError(f"Dicyclic K-set formula needs n >= 2, got {n}")
    values = {(d + 1) // 2 for d in divisors(n) if d % 2}
    values |= {(d + 2) // 2 for d in divisors(2 * n) if d % 2 == 0}
    if n % 2 == 0:
        values.add((n + 4) // 2)
    return KSet.of(values)


def is_minimal_normal(group: Group, normal: Subgroup) -> bool:
    if normal.is_trivial():
        return False
    return not any(not other.is_trivial() and other != normal and other.is_subgroup_of(normal)
                   for other in group.normal_subgroups)


def elementary_abelian_prime(normal: Subgroup) -> Optional[int]:
    """The prime p if the subgroup is a nontrivial elementary abelian p-group, else None."""
    if normal.is_trivial() or not normal.is_abelian():
        return None
    orders = {int(normal.parent.element_orders[i]) for i in normal.indices()} - {1}
    if len(orders) == 1:
        (p,) = orders
        if isprime(p):
            return p
    return None


def has_prime_power_orders(normal: Subgroup) -> bool:
    for i in normal.indices():
        order = int(normal.parent.element_orders[i])
        if order > 1 and len(primefactors(order)) != 1:
            return False
    return True


@dataclass
class PropertyCheck:
    """One assertion about one normal subgroup."""
    subgroup_order: int
    assertion: str
    passed: bool
    detail: str = ""


@dataclass
class PropertyReport:
    name: str
    checks: List[PropertyCheck] = field(default_factory=list)
    applicable: bool = True

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failures(self) -> Iterator[PropertyCheck]:
        return (check for check in self.checks if not check.passed)

    def add(self, subgroup_order: int, assertion: str, passed: bool, detail: str = "") -> None:
        self.checks.append(PropertyCheck(subgroup_order, assertion, bool(passed), detail))


def shi_property_check(group: Group) -> PropertyReport:
    """
    Check every 2-decomposable proper normal subgroup N:
    N is an elementary abelian p-group, minimal normal, inside Z(O_p(G)),
    |N|(|N|-1) divides |G|, and |G| is even.
    """
    report = PropertyReport("2-decomposable")
    for normal in find_n_decomposable(group, 2):
        size = normal.order
        p = elementary_abelian_prime(normal)
        report.add(size, "elementary abelian", p is not None)
        report.add(size, "minimal normal", is_minimal_normal(group, normal))
        if p is not None:
            core_center = maximal_normal_p_subgroup(group, p).center()
            report.add(size, f"inside Z(O_{p}(G))", normal.is_subgroup_of(core_center),
                       f"|Z(O_{p})| = {core_center.order}")
        else:
            report.add(size, "inside Z(O_p(G))", False, "not a p-group")
        report.add(size, "|N|(|N|-1) divides |G|", group.order % (size * (size - 1)) == 0,
                   f"{size}*{size - 1} vs {group.order}")
        report.add(size, "|G| even", group.order % 2 == 0)
    return report


def jing_property_check(group: Group) -> PropertyReport:
    """
    Check every 3-decomposable proper normal subgroup N.

    Always: each element of N has prime-power order. If N is a minimal normal
    p-group it lies in Z(O_p(G)). Otherwise N contains a 2-decomposable
    normal subgroup N1 that is an elementary abelian p-group, and either N is
    a p-group or |N : N1| is a prime other than p.
    """
    report = PropertyReport("3-decomposable")
    two_decomposable = find_n_decomposable(group, 2)
    for normal in find_n_decomposable(group, 3):
        size = normal.order
        report.add(size, "prime-power element orders", has_prime_power_orders(normal))

        if is_minimal_normal(group, normal):
            primes = primefactors(size)
            if len(primes) == 1:
                p = primes[0]
                core_center = maximal_normal_p_subgroup(group, p).center()
                report.add(size, f"inside Z(O_{p}(G))", normal.is_subgroup_of(core_center))
            continue

        inner = [n1 for n1 in two_decomposable if n1 != normal and n1.is_subgroup_of(normal)]
        witnesses = []
        for n1 in inner:
            p = elementary_abelian_prime(n1)
            if p is None:
                continue
            index = size // n1.order
            if is_prime_power(size, p) or (isprime(index) and index != p):
                witnesses.append(n1.order)
        report.add(size, "contains a suitable 2-decomposable N1", bool(witnesses),
                   f"|N1| in {witnesses}" if witnesses else "no elementary abelian N1 fits")
    return report


def frobenius_identity_check(group: Group) -> PropertyReport:
    """
    For non-perfect, nonabelian, centerless groups whose derived subgroup is
    2-decomposable: |G| = |G'|(|G'| - 1).
    """
    report = PropertyReport("Frobenius identity")
    derived = group.derived_subgroup
    if (is_perfect(group) or group.is_abelian or not group.center.is_trivial()
            or ncc(group, derived) != 2):
        report.applicable = False
        return report
    size = derived.order
    report.add(size, "|G| = |G'|(|G'|-1)", group.order == size * (size - 1),
               f"{group.order} vs {size}*{size - 1}")
    return report


@dataclass
class NormalSubgroupEntry:
    order: int
    ncc: int
    class_sizes: List[int]
    class_reps: List[str]


@dataclass
class DecompositionReport:
    group_order: int
    abelian: bool
    perfect: bool
    entries: List[NormalSubgroupEntry]
    kset: KSet
    label: Optional[str] = None

    def to_text_lines(self) -> List[str]:
        """
        One header line, one line per proper normal subgroup, then "K = {...}".

            group order=8 abelian=no perfect=no
            N0 order=1 ncc=1 sizes=1 reps=()
            ...
            K = {1,2,3}
        """
        head = f"group order={self.group_order} abelian={'yes' if self.abelian else 'no'} " \
               f"perfect={'yes' if self.perfect else 'no'}"
        if self.label:
            head = f"{self.label}: {head}"
        lines = [head]
        for i, entry in enumerate(self.entries):
            sizes = ",".join(str(s) for s in entry.class_sizes)
            lines.append(f"N{i} order={entry.order} ncc={entry.ncc} sizes={sizes} "
                         f"reps={';'.join(entry.class_reps)}")
        lines.append(f"K = {self.kset}")
        return lines

    def to_json_lines(self) -> List[str]:
        """Records "group", "normal_subgroup" (one each) and "kset", one JSON object per line."""
        records = [{"record": "group", "label": self.label, "order": self.group_order,
                    "abelian": self.abelian, "perfect": self.perfect}]
        for i, entry in enumerate(self.entries):
            records.append({"record": "normal_subgroup", "index": i, **asdict(entry)})
        records.append({"record": "kset", "kset": list(self.kset.values)})
        return [json.dumps(record) for record in records]

    @classmethod
    def from_json_lines(cls, lines: Iterable[str]) -> 'DecompositionReport':
        header, entries, values = None, [], ()
        for line in lines:
            if not line.strip():
                continue
            record = json.loads(line)
            kind = record.pop("record")
            if kind == "group":
                header = record
            elif kind == "normal_subgroup":
                record.pop("index")
                entries.append(NormalSubgroupEntry(**record))
            elif kind == "kset":
                values = tuple(record["kset"])
        if header is None:
            raise ValueError("No group record in JSON lines")
        return cls(header["order"], header["abelian"], header["perfect"], entries, KSet(values),
                   header.get("label"))

    def print_report(self, output_format: str = "text") -> None:
        lines = self.to_json_lines() if output_format == "json" else self.to_text_lines()
        for line in lines:
            print(line)


def decompose(group: Group, label: Optional[str] = None) -> DecompositionReport:
    """Per proper normal subgroup: order, ncc and the contained classes, plus K_G."""
    entries = []
    for normal in proper_normal_subgroups(group):
        contained = classes_in(group, normal)
        entries.append(NormalSubgroupEntry(
            order=normal.order,
            ncc=len(contained),
            class_sizes=[c.size for c in contained],
            class_reps=[str(group.elements[c.representative]) for c in contained],
        ))
    return DecompositionReport(
        group_order=group.order,
        abelian=group.is_abelian,
        perfect=is_perfect(group),
        entries=entries,
        kset=KSet.of(entry.ncc for entry in entries),
        label=label,
    )
