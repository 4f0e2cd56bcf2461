"""Command-line verification harness.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage or
internal errors. Report bodies carry no timestamps unless ``--timings`` is set.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import click

from mintheta.decomp import NUMERIC_MODELS, CheckResult, expand_theta
from mintheta.gk import audit_summary, gk_factor, pair_chi, rs_v0
from mintheta.parabolic import distinguished_elements, find_pair, find_triple, tilde_beta
from mintheta.rootsys import UnsupportedType, height, parse_type
from mintheta.verify import GROUPS, run_suite
from mintheta.weyl import DEFAULT_BUDGET, element_of, reflection
from mintheta.zexpr import DEFAULT_MODEL, SECOND_MODEL, ZetaModel, fmt_frac, leading_coefficient, pole_order, value_at

FORMATS = click.Choice(["json", "md"])


@dataclass
class SuiteConfig:
    models: tuple[ZetaModel, ...] = NUMERIC_MODELS
    fmt: str = "md"
    filters: tuple[str, ...] = ()
    budget: int = DEFAULT_BUDGET
    timings: bool = False
    output: str | None = None


def _models_for(zeta: str | None) -> tuple[ZetaModel, ...]:
    if not zeta:
        return NUMERIC_MODELS
    chosen = ZetaModel.parse(zeta)
    other = SECOND_MODEL if chosen != SECOND_MODEL else DEFAULT_MODEL
    return (chosen, other)


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, dict):
        raise click.UsageError("config file must hold a JSON object")
    return data


def _emit(payload, fmt: str, md: str) -> None:
    if fmt == "json":
        click.echo(json.dumps(payload, indent=2, ensure_ascii=False, sort_keys=False))
    else:
        click.echo(md)


def _md_table(headers: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    def cell(x: object) -> str:
        return str(x).replace("|", "\\|")

    lines = ["| " + " | ".join(headers) + " |", "|" + "---|" * len(headers)]
    lines += ["| " + " | ".join(cell(x) for x in row) + " |" for row in rows]
    return "\n".join(lines)


def _render(results: list[CheckResult], cfg: SuiteConfig) -> str:
    if cfg.fmt == "json":
        return json.dumps([r.to_dict(cfg.timings) for r in results], indent=2, ensure_ascii=False)
    failed = sum(not r.passed for r in results)
    rows = [(r.id, r.status, r.expected, r.computed, r.provenance) for r in results]
    summary = f"\n{len(results) - failed}/{len(results)} checks passed"
    return _md_table(["id", "status", "expected", "computed", "provenance"], rows) + summary


def _report(results: list[CheckResult], cfg: SuiteConfig) -> int:
    text = _render(results, cfg)
    if cfg.output:
        Path(cfg.output).write_text(text + "\n", encoding="utf-8")
    else:
        click.echo(text)
    return 0 if all(r.passed for r in results) else 1


@click.group()
def cli() -> None:
    """Verify minimal-representation theta functionals from root data."""


@cli.command()
@click.argument("group", type=click.Choice(["all", *GROUPS]), default="all")
@click.option("--format", "fmt", type=FORMATS, default=None, help="Report format.")
@click.option("--zeta", default=None, help="Zeta model, e.g. q=2,g=1,num=1:0:2.")
@click.option("--filter", "filters", multiple=True, help="Glob on check ids; repeatable.")
@click.option("--budget", type=int, default=None, help="Cap on full Weyl group enumeration.")
@click.option("--config", "config_path", default=None, help="JSON file with the same keys.")
@click.option("--timings", is_flag=True, help="Include duration_ms in JSON output.")
@click.option("--output", default=None, help="Write the report to a file instead of stdout.")
def verify(
    group: str,
    fmt: str | None,
    zeta: str | None,
    filters: tuple[str, ...],
    budget: int | None,
    config_path: str | None,
    timings: bool,
    output: str | None,
) -> int:
    """Run the check suite or one group of it."""
    conf = _load_config(config_path)
    cfg = SuiteConfig(
        models=_models_for(zeta or conf.get("zeta")),
        fmt=fmt or conf.get("format", "md"),
        filters=filters or tuple(conf.get("filter", ())),
        budget=budget or int(conf.get("budget", DEFAULT_BUDGET)),
        timings=timings,
        output=output or conf.get("output"),
    )
    groups = GROUPS if group == "all" else (group,)
    results = run_suite(groups, cfg.filters, cfg.models, cfg.budget)
    if not results:
        raise click.UsageError(f"no checks match the filters {list(cfg.filters)}")
    return _report(results, cfg)


@cli.group()
def show() -> None:
    """Show root data, pairs and triples."""


@show.command("roots")
@click.argument("type_name")
@click.option("--format", "fmt", type=FORMATS, default="md")
def show_roots(type_name: str, fmt: str) -> int:
    rs = parse_type(type_name)
    rows = [(i + 1, "".join(map(str, r)), height(r)) for i, r in enumerate(rs.positive_roots)]
    payload = {"type": rs.name, "count": len(rows), "roots": [{"coeffs": list(r), "height": height(r)} for r in rs.positive_roots]}
    _emit(payload, fmt, _md_table(["#", "coefficients", "height"], rows))
    return 0


@show.command("pair")
@click.argument("name")
@click.option("--format", "fmt", type=FORMATS, default="md")
def show_pair(name: str, fmt: str) -> int:
    p = find_pair(name)
    data = p.to_dict()
    if p.pair_type in ("S", "H"):
        data["tilde_beta"] = "".join(map(str, tilde_beta(p).root))
    _emit(data, fmt, _md_table(["field", "value"], list(data.items())))
    return 0


@show.command("triple")
@click.argument("key")
@click.option("--format", "fmt", type=FORMATS, default="md")
def show_triple(key: str, fmt: str) -> int:
    t = find_triple(key)
    d = distinguished_elements(t)
    data = t.to_dict()
    data["v0"], data["v1"] = repr(d.v0), repr(d.v1)
    _emit(data, fmt, _md_table(["field", "value"], list(data.items())))
    return 0


@cli.group("gk")
def gk_group() -> None:
    """Gindikin-Karpelevich factors."""


def _element(pair_name: str, spec: str):
    p = find_pair(pair_name)
    rs = p.rs
    if spec == "v0":
        return p, rs_v0(p)
    if spec == "v1":
        return p, distinguished_elements(find_triple(pair_name.replace(":", "/").replace(",", "/"))).v1
    if spec in ("v0sb", "relevant"):
        return p, rs_v0(p) * reflection(rs, p.beta0)
    return p, element_of(rs, spec)


@gk_group.command("factor")
@click.argument("pair_name")
@click.argument("element")
@click.option("--at", "at", default=None, help="Point s at which to report value, residue or leading term.")
@click.option("--format", "fmt", type=FORMATS, default="md")
def gk_factor_cmd(pair_name: str, element: str, at: str | None, fmt: str) -> int:
    """c_w(s) for w = v0, v1, v0sb or a word such as 13425431."""
    p, w = _element(pair_name, element)
    c = gk_factor(p.rs, w, pair_chi(p))
    data = {"pair": p.label, "w": repr(w), "c_w": str(c)}
    if at is not None:
        s = Fraction(at)
        order = pole_order(c, s)
        data["at"] = fmt_frac(s)
        data["order"] = order
        if order == 0:
            data["value"] = str(value_at(c, s))
        elif order == -1:
            data["residue"] = str(leading_coefficient(c, s))
        elif order < -1:
            data["leading"] = str(leading_coefficient(c, s))
        else:
            data["value"] = "0"
    _emit(data, fmt, _md_table(["field", "value"], list(data.items())))
    return 0


@cli.group("ct")
def ct_group() -> None:
    """Constant-term audits."""


@ct_group.command("audit")
@click.argument("key")
@click.option("--format", "fmt", type=FORMATS, default="md")
def ct_audit_cmd(key: str, fmt: str) -> int:
    t = find_triple(key)
    s = audit_summary(t)
    s0 = t.params0[0]
    rows = [r.to_dict(s0) for r in s.reports]
    if fmt == "json":
        _emit({"triple": t.key, "passed": s.passed, "problems": s.problems, "terms": rows}, "json", "")
    else:
        body = _md_table(list(rows[0].keys()), [list(r.values()) for r in rows])
        click.echo(body + f"\n\naudit {'passed' if s.passed else 'FAILED: ' + '; '.join(s.problems)}")
    return 0 if s.passed else 1


@cli.group("decomp")
def decomp_group() -> None:
    """Expansion trees."""


@decomp_group.command("expand")
@click.argument("pair_name")
@click.option("--depth", default="1", help="Integer depth or 'full'.")
@click.option("--transitions", is_flag=True, help="Rewrite (D_n, A_{n-1}) leaves through transitions.")
@click.option("--format", "fmt", type=FORMATS, default="md")
def decomp_expand(pair_name: str, depth: str, transitions: bool, fmt: str) -> int:
    tree = expand_theta(pair_name, depth if depth == "full" else int(depth), transitions)
    rows = [(f"|Δ|^{fmt_frac(c.exponent)}", c.functional, "".join("∘" + x for x in c.path)) for c in tree.children]
    _emit(tree.to_dict(), fmt, str(tree) + "\n\n" + _md_table(["coefficient", "functional", "path"], rows))
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    try:
        rv = cli.main(args=list(argv) if argv is not None else None, prog_name="mintheta", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return 2
    except click.Abort:
        return 2
    except (KeyError, ValueError, UnsupportedType) as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except Exception as exc:  # internal error
        click.echo(f"internal error: {type(exc).__name__}: {exc}", err=True)
        return 2
    return rv if isinstance(rv, int) else 0


run = main


if __name__ == "__main__":
    sys.exit(main())
