"""Batch command-line client for the analysis service.

Commands talk to the HTTP service; by default the application runs
in-process over an ASGI transport, so no server is needed. Point
``--server`` at a running instance to use it instead.

Exit codes: 0 success / suite passed, 1 suite failure or other invalid
input, 2 unreadable or malformed input, 3 dimension overflow, 4 zero
state. Stdout carries a single JSON document on every non-crash path.
"""

from __future__ import annotations

import asyncio
import json
import sys

import click
import httpx

from . import __version__

_EXIT_OK = 0
_EXIT_FAILURE = 1
_EXIT_PARSE = 2
_EXIT_OVERFLOW = 3
_EXIT_ZERO_STATE = 4

_EXIT_BY_CODE = {
    "parse_error": _EXIT_PARSE,
    "dimension_overflow": _EXIT_OVERFLOW,
    "zero_state": _EXIT_ZERO_STATE,
    "invalid_input": _EXIT_FAILURE,
}


def _post(path: str, payload: dict, server: str | None) -> httpx.Response:
    if server:
        with httpx.Client(base_url=server, timeout=600.0) as client:
            return client.post(path, json=payload)

    async def in_process():
        from .service.app import create_app

        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(
            base_url="http://mqsym.local", transport=transport, timeout=None
        ) as client:
            return await client.post(path, json=payload)

    return asyncio.run(in_process())


def _emit(document, pretty: bool):
    click.echo(json.dumps(document, indent=2 if pretty else None))


def _fail(code: str, message: str, pretty: bool):
    _emit({"error": {"code": code, "message": message}}, pretty)
    sys.exit(_EXIT_BY_CODE.get(code, _EXIT_FAILURE))


def _read_document(path: str, pretty: bool) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        _fail("parse_error", f"cannot read {path}: {exc}", pretty)


def _handle(response: httpx.Response, pretty: bool) -> dict:
    """Print the service reply; translate error payloads into exit codes."""
    try:
        body = response.json()
    except json.JSONDecodeError:
        _fail("invalid_input", f"service returned non-JSON (HTTP {response.status_code})", pretty)
    if response.status_code == 200:
        return body
    detail = body.get("detail")
    if isinstance(detail, dict) and "code" in detail:
        _fail(detail["code"], detail.get("message", ""), pretty)
    # FastAPI model-validation errors arrive as a detail list: bad document.
    _fail("parse_error", json.dumps(detail), pretty)


def _write_or_emit(document: dict, out: str | None, pretty: bool):
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            json.dump(document, handle, indent=2)
            handle.write("\n")
        _emit({"written": out}, pretty)
    else:
        _emit(document, pretty)


@click.group()
@click.version_option(version=__version__, prog_name="mqsym")
@click.option("--server", default=None, metavar="URL",
              help="Base URL of a running service (default: run in-process).")
@click.option("--tol", type=float, default=None, help="Numerical tolerance override.")
@click.option("--seed", type=int, default=0, show_default=True, help="RNG seed.")
@click.option("--pretty", is_flag=True, help="Indent JSON output.")
@click.pass_context
def main(ctx, server, tol, seed, pretty):
    """Classify entanglement structure and exchange symmetry of pure states."""
    ctx.obj = {"server": server, "tol": tol, "seed": seed, "pretty": pretty}


def _analysis_command(ctx, path_arg, endpoint):
    opts = ctx.obj
    doc = _read_document(path_arg, opts["pretty"])
    response = _post(endpoint, {"state": doc, "tol": opts["tol"]}, opts["server"])
    _emit(_handle(response, opts["pretty"]), opts["pretty"])


@main.command()
@click.argument("state_file", type=click.Path())
@click.pass_context
def classify(ctx, state_file):
    """Full report for a state file: symmetry class plus factorization."""
    _analysis_command(ctx, state_file, "/classify")


@main.command()
@click.argument("state_file", type=click.Path())
@click.pass_context
def factorize(ctx, state_file):
    """Finest product decomposition of a state file."""
    _analysis_command(ctx, state_file, "/factorize")


@main.command()
@click.argument("state_file", type=click.Path())
@click.option("--normalize", "normalize_flag", is_flag=True,
              help="Normalize the projection (error on the zero state).")
@click.option("-o", "--out", default=None, type=click.Path(),
              help="Write the projected state here instead of stdout.")
@click.pass_context
def symmetrize(ctx, state_file, normalize_flag, out):
    """Project a state file onto the symmetric subspace."""
    opts = ctx.obj
    doc = _read_document(state_file, opts["pretty"])
    response = _post("/symmetrize", {"state": doc, "normalize": normalize_flag},
                     opts["server"])
    body = _handle(response, opts["pretty"])
    _write_or_emit(body["state"], out, opts["pretty"])


@main.command()
@click.argument("state_file", type=click.Path())
@click.option("--keep", type=int, multiple=True, required=True,
              help="Site label to keep (repeatable).")
@click.option("-o", "--out", default=None, type=click.Path(),
              help="Write the reduced density matrix here instead of stdout.")
@click.pass_context
def reduce(ctx, state_file, keep, out):
    """Reduced density matrix of a state file on the kept sites."""
    opts = ctx.obj
    doc = _read_document(state_file, opts["pretty"])
    response = _post("/reduce", {"state": doc, "keep": list(keep)}, opts["server"])
    body = _handle(response, opts["pretty"])
    _write_or_emit(body["density"], out, opts["pretty"])


@main.command()
@click.argument("kind", type=click.Choice(
    ["ghz", "w", "dicke", "slater", "random", "product", "symmetric", "equipollent"]))
@click.option("--sites", type=int, required=True, help="Number of constituents N.")
@click.option("--dim", type=int, default=2, show_default=True, help="Local dimension n.")
@click.option("--k", "excitations", type=int, default=None, help="Excitations for dicke.")
@click.option("--levels", default=None, metavar="L0,L1,...",
              help="Comma-separated levels for slater.")
@click.option("--seed", type=int, default=None, help="Seed override for random kinds.")
@click.option("-o", "--out", default=None, type=click.Path(),
              help="Write the state here instead of stdout.")
@click.pass_context
def gen(ctx, kind, sites, dim, excitations, levels, seed, out):
    """Generate a canonical or seeded random state file."""
    opts = ctx.obj
    payload = {
        "kind": kind,
        "num_sites": sites,
        "local_dim": dim,
        "seed": seed if seed is not None else opts["seed"],
    }
    if excitations is not None:
        payload["excitations"] = excitations
    if levels is not None:
        try:
            payload["levels"] = [int(part) for part in levels.split(",")]
        except ValueError:
            _fail("parse_error", f"cannot parse levels {levels!r}", opts["pretty"])
    response = _post("/gen", payload, opts["server"])
    body = _handle(response, opts["pretty"])
    _write_or_emit(body["state"], out, opts["pretty"])


@main.command()
@click.option("--suite", required=True, help="Suite id (see README for the list).")
@click.option("--trials", type=int, default=100, show_default=True)
@click.option("--sites", type=int, default=4, show_default=True)
@click.option("--dim", type=int, default=2, show_default=True)
@click.option("--seed", type=int, default=None, help="Seed override.")
@click.option("--tol", type=float, default=None, help="Tolerance override.")
@click.pass_context
def verify(ctx, suite, trials, sites, dim, seed, tol):
    """Run a named verification suite; exit 0 on pass, 1 on any failure."""
    opts = ctx.obj
    payload = {
        "suite": suite,
        "trials": trials,
        "num_sites": sites,
        "local_dim": dim,
        "seed": seed if seed is not None else opts["seed"],
        "tol": tol if tol is not None else opts["tol"],
    }
    response = _post("/verify", payload, opts["server"])
    body = _handle(response, opts["pretty"])
    _emit(body, opts["pretty"])
    sys.exit(_EXIT_OK if body.get("passed") else _EXIT_FAILURE)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service with uvicorn."""
    import uvicorn

    uvicorn.run("mqsym.service.app:app", host=host, port=port)


if __name__ == "__main__":
    main()
