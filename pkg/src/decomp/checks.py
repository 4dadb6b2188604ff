"""Named checks run by the command line, one function per check id."""
from __future__ import annotations

import time
from dataclasses import dataclass, field

from .building import Building, build_building
from .coxeter import y_dimension_probe
from .decompositions import decompositions, parabolic_iso_check, vector_decompositions
from .groups import (MatrixGroup, check_equivariance, fixed_point_pipeline, steinberg_les_check,
                     subgroup_roster)
from .homology import homology, is_cohen_macaulay, is_spherical


def _betti(h) -> dict:
    return {str(k): v for k, v in sorted(h.nonzero().items())}


def _torsion(h) -> dict:
    return {str(k): v for k, v in sorted(h.torsion.items()) if v}


@dataclass
class CheckResult:
    check: str
    building: str
    status: str  # pass, fail, probe or unknown
    values: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_json(self) -> dict:
        return {"check": self.check, "building": self.building, "status": self.status,
                "values": self.values, "seconds": round(self.seconds, 3)}


def _status(ok) -> str:
    if ok is None:
        return "unknown"
    return "pass" if ok else "fail"


def check_cb_pd_equiv(b: Building, ctx: dict):
    dec = decompositions(b)
    hp, hy, hc = homology(dec.PD), homology(dec.Y), homology(dec.CB)
    gamma = dec.gamma_homology_map()
    ok = hp.same_as(hy) and hy.same_as(hc) and gamma.iso
    if ctx.get("group", True) and b.kind == "typeA":
        grp = MatrixGroup.full(*b.field)
        eq = check_equivariance(dec.gamma_poset_map(), b, grp, base=dec.PD)
        ok &= eq
    return ok, {"PD": _betti(hp), "Y": _betti(hy), "CB": _betti(hc), "gamma_iso": gamma.iso,
                "torsion": _torsion(hp)}


def check_opd_join(b: Building, ctx: dict):
    dec = decompositions(b)
    ho, hj = homology(dec.OPD), homology(dec.join_model)
    phi = dec.phi_homology_map()
    return ho.same_as(hj) and phi.iso, {"OPD": _betti(ho), "join": _betti(hj), "phi_iso": phi.iso}


def _cm(poset, dim):
    rep = is_cohen_macaulay(poset)
    ok = None if rep.holds is None else (rep.holds and poset.dim == dim)
    return ok, {"dim": poset.dim, "expected_dim": dim, "links_checked": rep.checked,
                "failures": len(rep.failures), "unchecked": len(rep.unchecked)}


def check_od_cm(b: Building, ctx: dict):
    return _cm(decompositions(b).OD, b.dim)


def check_d_cm(b: Building, ctx: dict):
    return _cm(decompositions(b).D, b.dim)


def check_pd_spherical(b: Building, ctx: dict):
    dec = decompositions(b)
    d = 2 * b.dim + 1
    sp, so = is_spherical(dec.PD, d), is_spherical(dec.OPD, d)
    return sp and so, {"expected_dim": d, "PD": _betti(homology(dec.PD)),
                       "OPD": _betti(homology(dec.OPD)), "PD_spherical": sp, "OPD_spherical": so}


def check_vs_crossed(b: Building, ctx: dict):
    if b.kind != "typeA":
        return None, {"reason": "needs a type-A building"}
    v = vector_decompositions(b)
    out = {"ordered_iso": v.phi_map(True).iso, "unordered_iso": v.phi_map(False).iso}
    ok = out["ordered_iso"] and out["unordered_iso"]
    groups = ctx.get("subgroups")
    if groups:
        roster = {f"H{i}": MatrixGroup.from_config(g) for i, g in enumerate(groups)}
    else:
        roster = subgroup_roster(*b.field)
    for name, H in roster.items():
        row = {}
        for ordered, (s, t) in ((True, (v.OPD, v.OK2)), (False, (v.PD, v.K2))):
            fs, ft = fixed_point_pipeline(s, b, H), fixed_point_pipeline(t, b, H)
            iso = v.phi_map(ordered, fs, ft).iso
            row["ordered" if ordered else "unordered"] = {"sizes": [len(fs), len(ft)], "iso": iso}
            ok &= iso
        out[name] = row
    return ok, out


def check_wedge_book(b: Building, ctx: dict):
    r = decompositions(b).wedge_bookkeeping()
    vals = {k: {str(d): x for d, x in v.items()} for k, v in r.items() if k != "ok"}
    return r["ok"], vals


def check_parabolic_iso(b: Building, ctx: dict):
    up = parabolic_iso_check(b.model)
    low = decompositions(b).lower_interval_check()
    ok = up["explicit_map_iso"] and low["ok"]
    return ok, {"upper": up, "lower": {"spheres": low["spheres"], "failures": low["failures"]}}


def check_les_steinberg(b: Building, ctx: dict):
    if b.kind != "typeA":
        return None, {"reason": "needs a type-A building"}
    p, n = b.field
    r = steinberg_les_check(p, n)
    return r.ok and r.orbit_ok and r.skeleton_ok, r.to_json()


def check_y_question(b: Building, ctx: dict):
    return None, y_dimension_probe(b.model)


def check_upper_conjecture(b: Building, ctx: dict):
    rows = decompositions(b).upper_interval_probe()
    held = sum(1 for r in rows if r["OPD_spherical"] and r["PD_spherical"])
    return None, {"simplices": len(rows), "both_spherical": held, "rows": rows}


CHECKS = {
    "cb-pd-equiv": (check_cb_pd_equiv, "theorem"),
    "opd-join": (check_opd_join, "theorem"),
    "od-cm": (check_od_cm, "theorem"),
    "d-cm": (check_d_cm, "theorem"),
    "pd-spherical": (check_pd_spherical, "theorem"),
    "vs-crossed": (check_vs_crossed, "theorem"),
    "wedge-book": (check_wedge_book, "theorem"),
    "parabolic-iso": (check_parabolic_iso, "theorem"),
    "les-steinberg": (check_les_steinberg, "theorem"),
    "y-question": (check_y_question, "probe"),
    "upper-conjecture": (check_upper_conjecture, "probe"),
}


def run_check(check_id: str, b: Building | str, ctx: dict | None = None) -> CheckResult:
    if check_id not in CHECKS:
        raise KeyError(f"unknown check id {check_id!r}")
    if isinstance(b, str):
        b = build_building(b)
    fn, kind = CHECKS[check_id]
    t = time.perf_counter()
    ok, values = fn(b, ctx or {})
    status = "probe" if kind == "probe" else _status(ok)
    return CheckResult(check_id, b.name, status, values, time.perf_counter() - t)
