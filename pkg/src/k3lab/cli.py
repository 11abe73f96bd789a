"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or schema error.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import suites
from .isometry import (
    Isometry,
    MirrorContext,
    mk_exp_b,
    mk_internal_phi_b,
    mk_phi_b,
    mk_psi0,
    mk_psi1,
    mk_reflection,
    mk_xi,
)
from .lattice import HyperbolicSplitting, LatticeError, direct_sum, make_standard_lattice
from .limits import (
    b_shift_orbit,
    fibre_volume_sequence,
    kummer_plane_near,
    lcs_check,
    log_unipotent,
    monodromy_from_bshift_loop,
    weight_filtration,
)
from .mirror import fm_compare, mirror_triple
from .period import gamma_embed, phi34, psi43
from .sampling import elliptic_fixture
from .serialize import SchemaError, dumps, encode, lattice_by_label, load_file, parse_rat, rat

DEFAULT_SEED = 42


class VerificationFailed(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    seed: int = DEFAULT_SEED
    sample_count: int = 200
    tolerance_log10: int = -9
    output_path: str | None = None

    def __post_init__(self):
        if not 0 <= self.seed < 2 ** 64:
            raise SchemaError("seed must be a 64-bit unsigned integer", "seed")
        if self.sample_count < 1:
            raise SchemaError("sample count must be at least 1", "n")
        if not -15 <= self.tolerance_log10 <= -3:
            raise SchemaError("tolerance exponent must lie in [-15, -3]", "tolerance-log10")

    @property
    def tolerance(self) -> float:
        return 10.0 ** self.tolerance_log10


def env_seed() -> int:
    raw = os.environ.get("K3LAB_SEED")
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise SchemaError(f"K3LAB_SEED is not an integer: {raw!r}", "K3LAB_SEED") from None


def emit(obj, out: str | None = None):
    text = dumps(obj)
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text + "\n")
    sys.stdout.write(text + "\n")


def _ctx(args) -> MirrorContext:
    if getattr(args, "ctx", None):
        return load_file(args.ctx, "MirrorContext")
    return MirrorContext.standard()


# ---------------------------------------------------------------------------
# lattice


def cmd_lattice_info(args):
    if args.label:
        L = lattice_by_label(args.label)
    else:
        L = make_standard_lattice(args.kind, args.k)
    emit({"rank": L.rank, "signature": list(L.signature), "even": L.is_even})


def cmd_lattice_sum(args):
    parts = [lattice_by_label(x) for x in args.labels]
    L = direct_sum(*parts, label="+".join(args.labels))
    emit(L, args.out)


# ---------------------------------------------------------------------------
# isometries


def cmd_isom_verify(args):
    f = load_file(args.file, "Isometry")
    ok = f.verify()
    emit({"verified": ok, "integral": f.integral})
    if not ok:
        raise VerificationFailed


def cmd_isom_compose(args):
    f = load_file(args.f, "Isometry")
    g = load_file(args.g, "Isometry")
    emit(f @ g, args.out)


def cmd_isom_apply(args):
    f = load_file(args.f, "Isometry")
    x = load_file(args.vector, "Vector")
    emit(f(x), args.out)


def cmd_isom_make(args):
    ctx = _ctx(args)
    gen = args.generator
    needs_b = gen in ("phiB", "expB", "internalB")
    if needs_b and not args.B0:
        raise SchemaError(f"--B0 is required for {gen}", "B0")
    if gen == "reflection" and not args.root:
        raise SchemaError("--root is required for reflection", "root")
    if gen == "phiB":
        out = mk_phi_b(ctx, load_file(args.B0, "Vector"))
    elif gen == "expB":
        out = mk_exp_b(ctx, load_file(args.B0, "Vector"))
    elif gen == "internalB":
        out = mk_internal_phi_b(ctx.splitting, load_file(args.B0, "Vector"))
    elif gen == "reflection":
        out = mk_reflection(load_file(args.root, "Vector"))
    else:
        out = {"psi0": mk_psi0, "psi1": mk_psi1, "xi": mk_xi}[gen](ctx)
    emit(out, args.out)


# ---------------------------------------------------------------------------
# period domains


def cmd_period_gamma(args):
    ctx = _ctx(args)
    emit(gamma_embed(ctx, load_file(args.triple, "KahlerTriple")), args.out)


def cmd_period_phi34(args):
    ctx = _ctx(args)
    F = load_file(args.F, "ThreeSpace")
    B = load_file(args.B, "Vector")
    emit(phi34(ctx, F, parse_rat(args.alpha, "alpha"), B), args.out)


def cmd_period_psi43(args):
    ctx = _ctx(args)
    d = psi43(ctx, load_file(args.Pi, "FourSpace"))
    emit({"F": d.F, "alpha": d.alpha, "B": d.B}, args.out)


# ---------------------------------------------------------------------------
# mirror


def cmd_mirror_compute(args):
    ctx = _ctx(args)
    emit(mirror_triple(ctx, load_file(args.triple, "KahlerTriple")), args.out)


def _report(report, out):
    emit(report, out)
    if not report["passed"]:
        raise VerificationFailed


def cmd_mirror_verify(args):
    cfg = RunConfig(args.seed if args.seed is not None else env_seed(), args.n)
    _report(suites.run_all(cfg.seed, cfg.sample_count, only="mirror."), args.out)


def cmd_mirror_fm(args):
    ctx = _ctx(args)
    if args.f and args.s0:
        f, s0 = load_file(args.f, "Vector"), load_file(args.s0, "Vector")
    else:
        f, s0, *_ = elliptic_fixture(ctx)
    rep = fm_compare(ctx, f, s0)
    rows = [{"class": r.name, "xi_image": r.xi_image, "expected_fm": r.expected,
             "agrees_plain": r.agrees_plain, "agrees_via_eta": r.agrees_via_eta}
            for r in rep["rows"]]
    emit({"rows": rows, "xi_f_is_pt": rep["xi_f_is_pt"],
          "xi_vstar_is_one": rep["xi_vstar_is_one"], "discrepancies": rep["discrepancies"]}, args.out)


# ---------------------------------------------------------------------------
# limits


def _splitting_for(lattice, args) -> HyperbolicSplitting:
    if args.v and args.vstar:
        return HyperbolicSplitting(lattice, load_file(args.v, "Vector"), load_file(args.vstar, "Vector"))
    # default: the last two coordinates form the hyperbolic pair
    n = lattice.rank
    return HyperbolicSplitting(lattice, lattice.basis_vector(n - 2), lattice.basis_vector(n - 1))


def fmt_float(x: float) -> str:
    return repr(float(x))


def cmd_limits_orbit(args):
    cfg = RunConfig(tolerance_log10=args.tolerance_log10)
    B = load_file(args.B, "Vector")
    y = load_file(args.start, "Vector")
    split = _splitting_for(B.lattice, args)
    trace = b_shift_orbit(split, B, y, args.k)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            for step, (x, d) in enumerate(zip(trace.points, trace.distances), start=1):
                w.writerow([step, *(rat(c) for c in x.coords), fmt_float(d)])
    final = trace.distances[-1] if trace.distances else 0.0
    emit({"k": args.k, "final_point": trace.points[-1] if trace.points else y,
          "final_distance": fmt_float(final), "tolerance": fmt_float(cfg.tolerance),
          "below_tolerance": final < cfg.tolerance, "csv": args.csv})


def cmd_limits_monodromy(args):
    ctx = _ctx(args)
    T = monodromy_from_bshift_loop(ctx, load_file(args.B0, "Vector"))
    N = log_unipotent(T)
    W = weight_filtration(N)
    emit({"T": T, "N": [[rat(c) for c in r] for r in N], "dims": list(W.dims),
          "lcs": lcs_check(T)}, args.out)


def cmd_limits_kummer(args):
    ctx = _ctx(args)
    y1, y2 = load_file(args.y1, "Vector"), load_file(args.y2, "Vector")
    k = kummer_plane_near(ctx, y1, y2, args.bound)
    emit({"x1": k.x1, "x2": k.x2, "distance1": fmt_float(k.distance1),
          "distance2": fmt_float(k.distance2), "complete": k.complete}, args.out)


def cmd_limits_volumes(args):
    ctx = _ctx(args)
    t = load_file(args.triple, "KahlerTriple")
    ts = [parse_rat(x, "t") for x in args.t]
    vals = fibre_volume_sequence(ctx, t.line, t.omega, ts, rescale=not args.no_rescale)
    emit({"t": ts, "values": vals}, args.out)


# ---------------------------------------------------------------------------
# verify


def cmd_verify_all(args):
    cfg = RunConfig(args.seed if args.seed is not None else env_seed(), args.n,
                    args.tolerance_log10, args.out)
    report = suites.run_all(cfg.seed, cfg.sample_count, inject=args.inject)
    _report(report, cfg.output_path)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="k3lab", description="Exact lattice tools for K3 mirror symmetry.")
    top = p.add_subparsers(dest="group", required=True)

    def group(name, help_):
        g = top.add_parser(name, help=help_)
        return g.add_subparsers(dest="verb", required=True)

    def verb(sub, name, fn, help_, ctx=False, out=True):
        q = sub.add_parser(name, help=help_)
        q.set_defaults(func=fn)
        if ctx:
            q.add_argument("--ctx", help="MirrorContext JSON (default: K3 with U' the last U)")
        if out:
            q.add_argument("--out", help="also write the JSON output to this file")
        return q

    g = group("lattice", "lattice constructions")
    q = verb(g, "info", cmd_lattice_info, "rank, signature and parity", out=False)
    src = q.add_mutually_exclusive_group(required=True)
    src.add_argument("--kind", choices=["U", "minusE8", "K3", "USum"])
    src.add_argument("--label", help="e.g. K3+U, <2>+U, K3+(-U)")
    q.add_argument("--k", type=int, default=1, help="number of copies for USum")
    q = verb(g, "sum", cmd_lattice_sum, "orthogonal direct sum of labelled lattices")
    q.add_argument("labels", nargs="+")

    g = group("isom", "isometries")
    q = verb(g, "verify", cmd_isom_verify, "exact Gram check", out=False)
    q.add_argument("file")
    q = verb(g, "compose", cmd_isom_compose, "f∘g")
    q.add_argument("f")
    q.add_argument("g")
    q = verb(g, "apply", cmd_isom_apply, "f(x)")
    q.add_argument("f")
    q.add_argument("vector")
    q = verb(g, "make", cmd_isom_make, "build a generator", ctx=True)
    q.add_argument("generator", choices=["phiB", "expB", "internalB", "psi0", "psi1", "xi", "reflection"])
    q.add_argument("--B0")
    q.add_argument("--root")

    g = group("period", "period-domain dictionaries")
    q = verb(g, "gamma", cmd_period_gamma, "triple ↦ plane pair", ctx=True)
    q.add_argument("--triple", required=True)
    q = verb(g, "phi34", cmd_period_phi34, "(F, α, B) ↦ four-space", ctx=True)
    q.add_argument("--F", required=True)
    q.add_argument("--alpha", required=True)
    q.add_argument("--B", required=True)
    q = verb(g, "psi43", cmd_period_psi43, "four-space ↦ (F, α, B)", ctx=True)
    q.add_argument("--Pi", required=True)

    g = group("mirror", "mirror map")
    q = verb(g, "compute", cmd_mirror_compute, "closed-form mirror of a triple", ctx=True)
    q.add_argument("--triple", required=True)
    q = verb(g, "verify", cmd_mirror_verify, "run the mirror property suites")
    q.add_argument("--n", type=int, default=200)
    q.add_argument("--seed", type=int)
    q = verb(g, "fm", cmd_mirror_fm, "compare ξ with Fourier–Mukai Mukai vectors", ctx=True)
    q.add_argument("--f")
    q.add_argument("--s0")

    g = group("limits", "limits and density constructions")
    q = verb(g, "orbit", cmd_limits_orbit, "B-shift orbit with distances to [v]", out=False)
    q.add_argument("--B", required=True)
    q.add_argument("--start", required=True)
    q.add_argument("--k", type=int, default=60)
    q.add_argument("--csv")
    q.add_argument("--v")
    q.add_argument("--vstar")
    q.add_argument("--tolerance-log10", type=int, default=-9)
    q = verb(g, "monodromy", cmd_limits_monodromy, "T, log T and filtration dims", ctx=True)
    q.add_argument("--B0", required=True)
    q = verb(g, "kummer", cmd_limits_kummer, "Kummer-type plane near two targets", ctx=True)
    q.add_argument("--y1", required=True)
    q.add_argument("--y2", required=True)
    q.add_argument("--bound", type=int, default=50)
    q = verb(g, "volumes", cmd_limits_volumes, "fibre volumes along ω_t = tω", ctx=True)
    q.add_argument("--triple", required=True)
    q.add_argument("--t", nargs="+", required=True)
    q.add_argument("--no-rescale", action="store_true")

    g = group("verify", "property suites")
    q = verb(g, "all", cmd_verify_all, "run every suite")
    q.add_argument("--seed", type=int)
    q.add_argument("--n", type=int, default=200)
    q.add_argument("--tolerance-log10", type=int, default=-9)
    q.add_argument("--inject", choices=["broken-gram"], help="negative control")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        args.func(args)
    except VerificationFailed:
        return 1
    except SchemaError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (LatticeError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return 0
