"""Thin CLI client for the service.

Every subcommand builds a request, posts it to the service and renders the
response. By default the service runs in-process over an ASGI test transport
(no server needed); pass --url (or set HESSAUT_URL) to talk to a remote
instance started with `hessaut serve`.

Exit codes: 0 success / full verification pass, 1 verification failure,
2 usage or parameter error.
"""

from __future__ import annotations

import json
import sys

import click
import httpx


def _client(url: str | None) -> httpx.Client:
    if url:
        return httpx.Client(base_url=url, timeout=None)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DeprecationWarning)
        from fastapi.testclient import TestClient

    from .service.app import create_app

    return TestClient(create_app())


def _post(ctx_obj, path: str, payload: dict) -> dict:
    with _client(ctx_obj["url"]) as client:
        resp = client.post(path, json=payload)
    if resp.status_code == 200:
        return resp.json()
    try:
        detail = resp.json().get("detail", resp.text)
    except Exception:
        detail = resp.text
    click.echo(f"error ({resp.status_code}): {detail}", err=True)
    sys.exit(2)


@click.group()
@click.option("--url", envvar="HESSAUT_URL", default=None, help="Remote service URL (default: in-process).")
@click.pass_context
def main(ctx, url):
    """Hessian determinantal representations of E_S and their p-groups."""
    ctx.ensure_object(dict)
    ctx.obj["url"] = url


@main.command()
@click.option("--s", "s", type=int, required=True, help="Curve parameter S.")
@click.option("--p", "p", type=int, required=True, help="Field characteristic.")
@click.option("--f", "f", type=int, default=1, show_default=True, help="Extension degree.")
@click.pass_context
def torsion(ctx, s, p, f):
    """3-torsion count and point list of E_S over F_{p^f}."""
    data = _post(ctx.obj, "/torsion", {"s": s, "p": p, "f": f})
    click.echo(json.dumps(data, indent=1))


@main.command("aut-order")
@click.option("--i", "i", type=click.IntRange(1, 3), required=True)
@click.option("--s", "s", type=int, required=True)
@click.option("--p", "p", type=int, required=True)
@click.option("--f", "f", type=int, default=1, show_default=True)
@click.option("--oracle", is_flag=True, help="Cross-check against the GL_3 brute-force oracle.")
@click.option("--lie", is_flag=True, help="Lie-algebra order (drop the Galois factor).")
@click.option("--json", "as_json", is_flag=True, help="Emit the raw JSON response.")
@click.pass_context
def aut_order(ctx, i, s, p, f, oracle, lie, as_json):
    """Automorphism-group order of G_{i,S}(F_{p^f}) by the closed formula."""
    data = _post(
        ctx.obj,
        "/aut-order",
        {"i": i, "s": s, "p": p, "f": f, "oracle": oracle, "group": not lie},
    )
    if as_json:
        click.echo(json.dumps(data, indent=1))
        return
    fac = data["factors"]
    kind = "|Aut(G)|" if not lie else "|Aut(g)|"
    click.echo(
        f"{kind} for i={i}, S={s}, q={p}^{f}: {data['exact']}\n"
        f"  = {fac['galois']} (galois) * {fac['gcd_factor']} (gcd) * {fac['gl2']} (|GL_2|)"
        f" * {fac['q_pow18']} (q^18) * {fac['torsion']} (|E[3]|)"
    )
    if data.get("oracle"):
        o = data["oracle"]
        click.echo(f"  oracle: |Aut_V^=| = {o['autVeq']}, agrees = {o['agrees']}")
        if not o["agrees"]:
            sys.exit(1)


@main.command()
@click.option("--i", "i", type=click.IntRange(1, 3), required=True)
@click.option("--j", "j", type=click.IntRange(1, 3), required=True)
@click.option("--s", "s", type=int, required=True)
@click.option("--sp", "sp", type=int, required=True, help="Second parameter S'.")
@click.option("--sign-i", type=click.Choice(["+", "-"]), default="+", show_default=True)
@click.option("--sign-j", type=click.Choice(["+", "-"]), default="+", show_default=True)
@click.option("--p", "p", type=int, required=True)
@click.option("--oracle", is_flag=True, help="Run the exhaustive GL_3 witness search.")
@click.pass_context
def iso(ctx, i, j, s, sp, sign_i, sign_j, p, oracle):
    """Isomorphism verdict for g_{i,S} vs g_{j,S'} over F_p (JSON)."""
    data = _post(
        ctx.obj,
        "/iso",
        {
            "i": i,
            "j": j,
            "s": s,
            "sp": sp,
            "sign_i": sign_i,
            "sign_j": sign_j,
            "p": p,
            "oracle": oracle,
        },
    )
    click.echo(json.dumps(data, indent=1))


@main.command("hessian-solve")
@click.option("--s", "s", type=int, required=True)
@click.option("--p", "p", type=int, default=None, help="Solve over F_{p^f} instead of the exact ring.")
@click.option("--f", "f", type=int, default=1, show_default=True)
@click.pass_context
def hessian_solve(ctx, s, p, f):
    """Solutions (alpha, beta) of the Hessian equation for f_S (JSON)."""
    payload = {"s": s, "f": f}
    if p is not None:
        payload["p"] = p
    data = _post(ctx.obj, "/hessian-solve", payload)
    click.echo(json.dumps({"solutions": data["solutions"], "ring": data["ring"], "complete": data["complete"]}, indent=1))


@main.command()
@click.option("--s", "s", type=int, required=True)
@click.option("--pmax", type=int, required=True)
@click.option("--out", type=click.Path(dir_okay=False, writable=True), required=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--porc-mods", default=None, help="Comma-separated moduli for the PORC mixing report.")
@click.option("--pofs", is_flag=True, help="Attach the POFS partition report.")
@click.pass_context
def scan(ctx, s, pmax, out, fmt, porc_mods, pofs):
    """Scan primes up to PMAX, write records to OUT, report PORC/POFS evidence."""
    mods = None
    if porc_mods:
        try:
            mods = [int(x) for x in porc_mods.split(",") if x.strip()]
        except ValueError:
            click.echo("error: --porc-mods expects comma-separated integers", err=True)
            sys.exit(2)
    data = _post(
        ctx.obj,
        "/scan",
        {"s": s, "pmax": pmax, "format": fmt, "porc_mods": mods, "pofs": pofs},
    )
    try:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(data["content"])
    except OSError as exc:
        click.echo(f"error: cannot write {out}: {exc}", err=True)
        sys.exit(2)
    click.echo(f"wrote {data['records']} records to {out} ({fmt})")
    for p_skipped, reason in data["skipped"]:
        click.echo(f"  skipped p={p_skipped}: {reason}")
    if data.get("porc"):
        for mod, classes in data["porc"].items():
            if classes:
                click.echo(f"  PORC mixing mod {mod}: {classes}")
            else:
                click.echo(f"  PORC mixing mod {mod}: none")
    if data.get("pofs"):
        for i, rep in data["pofs"].items():
            labels = ", ".join(f"{st['label']}(c={st['coefficient']})" for st in rep["sets"])
            click.echo(f"  POFS i={i}: {len(rep['sets'])} sets [{labels}] all_fit={rep['all_fit']}")


@main.command()
@click.option(
    "--suite",
    type=click.Choice(["all", "forms", "curve", "detrep", "algebra", "aut", "iso"]),
    default="all",
    show_default=True,
)
@click.option("--extended", is_flag=True, help="Include the slow p = 11 oracle checks.")
@click.pass_context
def verify(ctx, suite, extended):
    """Run the acceptance suites; exit 0 only on a full pass."""
    data = _post(ctx.obj, "/verify", {"suite": suite, "extended": extended})
    for suite_res in data["suites"]:
        for check in suite_res["checks"]:
            status = "PASS" if check["passed"] else "FAIL"
            click.echo(f"[{status}] {suite_res['suite']}: {check['name']} ({check['seconds']}s)")
            if not check["passed"]:
                click.echo(f"       {check['detail']}")
    click.echo("verification " + ("PASSED" if data["passed"] else "FAILED"))
    if not data["passed"]:
        sys.exit(1)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve(host, port):
    """Run the service with uvicorn."""
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
