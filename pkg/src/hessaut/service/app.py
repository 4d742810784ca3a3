"""FastAPI service wrapping the core package.

Domain errors (bad parameters like p | 2S, missing square roots) surface as
HTTP 400 with the library's message; validation errors are FastAPI's usual
422. Heavy endpoints (oracle runs, verify) compute synchronously -- the
service is a desk-scale compute wrapper, not a job queue.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import aut as aut_mod
from .. import iso as iso_mod
from ..curve import curve, three_torsion_points
from ..detrep import DetRepError, build_B, build_fS, hessian_equation_solve
from ..ff import FieldCtx, FieldElem, FieldError, make_field
from ..forms import ExactElem, ExactRing
from ..scan import ScanError, classify_primes, emit, pofs_partition, porc_violation_report
from ..verify import run_suites
from .models import (
    AutOrderRequest,
    AutOrderResponse,
    CheckModel,
    HessianSolveRequest,
    HessianSolveResponse,
    IsoOracleInfo,
    IsoRequest,
    IsoResponse,
    OracleInfo,
    ScanRequest,
    ScanResponse,
    SolutionPair,
    SuiteModel,
    TorsionRequest,
    TorsionResponse,
    VerifyRequest,
    VerifyResponse,
)

_DOMAIN_ERRORS = (
    FieldError,
    DetRepError,
    ScanError,
    aut_mod.AutError,
    iso_mod.IsoError,
    ValueError,
)


def _coord(x: FieldElem):
    return x.lift() if x.ctx.f == 1 else list(x.c)


def _exact_str(x) -> str:
    return repr(x)


def create_app() -> FastAPI:
    app = FastAPI(
        title="hessaut",
        description=(
            "Nilpotent groups from Hessian determinantal representations of "
            "elliptic curves: automorphism orders, oracles, prime scans."
        ),
        version="0.1.0",
    )

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/torsion", response_model=TorsionResponse)
    def torsion(req: TorsionRequest):
        try:
            ctx = make_field(req.p, req.f)
            E = curve(ctx, req.s)
            pts = three_torsion_points(E)
        except _DOMAIN_ERRORS as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        rendered = [
            "O" if P.infinity else [_coord(P.x), _coord(P.y)] for P in pts
        ]
        return TorsionResponse(
            p=req.p, f=req.f, q=ctx.q, s=req.s, e=len(pts), points=rendered
        )

    @app.post("/aut-order", response_model=AutOrderResponse)
    def aut_order(req: AutOrderRequest):
        try:
            ctx = make_field(req.p, req.f)
            order = (
                aut_mod.group_aut_order_formula(req.i, req.s, ctx)
                if req.group
                else aut_mod.lie_aut_order_formula(req.i, req.s, ctx)
            )
            oracle_info = None
            if req.oracle:
                rep = build_B(req.i, req.s, ring=ctx)
                res = aut_mod.enumerate_autVeq(rep, ctx)
                lie_exact = aut_mod.lie_aut_order_formula(req.i, req.s, ctx).exact
                oracle_info = OracleInfo(
                    autVeq=res.size,
                    agrees=aut_mod.aut_order_from_oracle(rep, ctx, res) == lie_exact,
                )
        except _DOMAIN_ERRORS as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return AutOrderResponse(
            p=req.p,
            f=req.f,
            i=req.i,
            s=req.s,
            factors={k: str(v) for k, v in order.factors().items()},
            exact=str(order.exact),
            oracle=oracle_info,
        )

    @app.post("/iso", response_model=IsoResponse)
    def iso(req: IsoRequest):
        try:
            ctx = make_field(req.p)
            query = iso_mod.IsoQuery(
                iso_mod.IsoSide(req.i, req.s, +1 if req.sign_i == "+" else -1),
                iso_mod.IsoSide(req.j, req.sp, +1 if req.sign_j == "+" else -1),
                ctx,
            )
            verdict = iso_mod.iso_classify(query)
            observed = iso_mod.iso_classify_observed(query, with_witness=False)
            oracle_info = None
            if req.oracle:
                orc = iso_mod.iso_oracle(query)
                oracle_info = IsoOracleInfo(
                    found=orc.witness is not None,
                    count=orc.count,
                    agrees_with_classifier=(orc.witness is not None) == verdict.isomorphic,
                )
        except _DOMAIN_ERRORS as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        witness = None
        if verdict.witness is not None:
            witness = [[x.lift() for x in row] for row in verdict.witness]
        return IsoResponse(
            isomorphic=verdict.isomorphic,
            rule=verdict.rule,
            witness=witness,
            observed_isomorphic=observed.isomorphic,
            observed_rule=observed.rule,
            oracle=oracle_info,
        )

    @app.post("/hessian-solve", response_model=HessianSolveResponse)
    def hessian_solve(req: HessianSolveRequest):
        try:
            if req.p is None:
                ring = ExactRing(req.s)
                f = build_fS(req.s, ring)
                res = hessian_equation_solve(f)
                ring_name = f"Q(sqrt({req.s}))" if ring.root is None else "Q"
            else:
                ctx = make_field(req.p, req.f)
                f = build_fS(req.s, ctx)
                hint = None
                rep_root = None
                from ..ff import canonical_sqrt

                rep_root = canonical_sqrt(ctx.from_int(req.s))
                if rep_root is not None:
                    hint = ctx.from_int(24 * req.s) * rep_root
                res = hessian_equation_solve(f, sort_hint=hint)
                ring_name = repr(ctx)
        except _DOMAIN_ERRORS as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return HessianSolveResponse(
            ring=ring_name,
            solutions=[
                SolutionPair(alpha=_exact_str(a), beta=_exact_str(b))
                for a, b in res.solutions
            ],
            complete=res.complete,
            message=res.message,
        )

    @app.post("/scan", response_model=ScanResponse)
    def scan(req: ScanRequest):
        try:
            result = classify_primes(req.s, req.pmax)
            content = emit(result.records, req.format)
            porc = None
            if req.porc_mods:
                reports = {}
                for mod in req.porc_mods:
                    rep = porc_violation_report(req.s, req.pmax, mod)
                    reports[str(mod)] = {
                        str(r): es for r, es in rep.mixed_classes[mod].items()
                    }
                porc = reports
            pofs = None
            if req.pofs:
                pofs = {}
                for i in (1, 2, 3):
                    rep = pofs_partition(req.s, req.pmax, i)
                    pofs[str(i)] = {
                        "sets": [
                            {
                                "label": s.label,
                                "membership": s.membership,
                                "coefficient": s.coefficient,
                                "primes": len(s.primes),
                                "fits": s.fits,
                            }
                            for s in rep.sets
                        ],
                        "all_fit": rep.all_fit,
                    }
        except _DOMAIN_ERRORS as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return ScanResponse(
            s=req.s,
            pmax=req.pmax,
            format=req.format,
            records=len(result.records),
            skipped=[[p, reason] for p, reason in result.skipped],
            content=content,
            porc=porc,
            pofs=pofs,
        )

    @app.post("/verify", response_model=VerifyResponse)
    def verify(req: VerifyRequest):
        try:
            results = run_suites(req.suite, req.extended)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        suites = [
            SuiteModel(
                suite=r.suite,
                passed=r.passed,
                checks=[
                    CheckModel(
                        name=c.name, passed=c.passed, detail=c.detail, seconds=c.seconds
                    )
                    for c in r.checks
                ],
            )
            for r in results
        ]
        return VerifyResponse(passed=all(r.passed for r in results), suites=suites)

    return app


app = create_app()
