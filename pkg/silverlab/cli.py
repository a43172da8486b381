"""
Command line front end

Reports go to stdout, diagnostics and logs to stderr. Exit codes: 0 when
every check is valid, 1 when a check fails or a construction gives up, 2 on
usage errors, parse errors and unreadable files.
"""
import functools
import json
import logging
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

import click
import pandas as pd

from silverlab import EXPERIMENTS_BY_NAME, __version__
from silverlab.coalitions import CoalitionFamily
from silverlab.exceptions import DerivationError, ScenarioError, SilverlabError, SpecParseError
from silverlab.experiments import (
    AntiDemocracyExperiment,
    BuildTreeExperiment,
    CheckCertExperiment,
    DensityExperiment,
    EscapeExperiment,
    ExperimentBase,
    ExperimentResult,
    ForcingExperiment,
    IrrelevanceExperiment,
    MonochromeExperiment,
    SwrWitnessExperiment,
    TriplesExperiment,
    WitnessFExperiment,
)
from silverlab.experiments.catalog import preset_family
from silverlab.seqcore import CoalitionDescriptor
from silverlab.speclang import ScenarioDoc, parse, parse_file
from silverlab.swr.welfare import CASES, VARIANTS

log = logging.getLogger(__name__)

EXIT_VALID = 0
EXIT_INVALID = 1
EXIT_USAGE = 2


@dataclass
class Options:
    seed: int
    as_json: bool
    csv_path: Optional[str]
    store: bool


def expression(text: str, kind: type):
    """Evaluate a single scenario expression such as "periodic('110')\""""
    value = parse(f"value = {text}").value("value")
    if not isinstance(value, kind):
        raise ScenarioError(f"{text!r} is not a {kind.__name__}")
    return value


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise click.BadParameter(f"{text!r} is not a rational number")


def _horizons(text: Optional[str]) -> Optional[List[int]]:
    if text is None:
        return None
    try:
        return [int(h) for h in text.split(",") if h.strip()]
    except ValueError:
        raise click.BadParameter(f"horizons must be comma separated integers, got {text!r}")


def handled(command):
    """Map library exceptions onto exit codes"""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            code = command(*args, **kwargs)
        except (SpecParseError, ScenarioError, DerivationError) as e:
            click.echo(f"error: {e}", err=True)
            ctx.exit(EXIT_USAGE)
        except SilverlabError as e:
            click.echo(f"failed: {e}", err=True)
            ctx.exit(EXIT_INVALID)
        except (ValueError, OSError) as e:
            click.echo(f"error: {e}", err=True)
            ctx.exit(EXIT_USAGE)
        ctx.exit(code)

    return wrapper


def emit(opts: Options, results: Sequence[ExperimentResult]) -> int:
    if opts.as_json:
        envelopes = [
            {
                "experiment": r.name,
                "valid": r.valid,
                "rows": json.loads(r.frame.to_json(orient="records")),
            }
            for r in results
        ]
        if len(envelopes) == 1:
            payload = envelopes[0]
        else:
            payload = {"valid": all(r.valid for r in results), "experiments": envelopes}
        click.echo(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        for r in results:
            for line in r.lines:
                click.echo(line)

    if opts.csv_path:
        frame = pd.concat(
            [r.frame.assign(experiment=r.name) for r in results], ignore_index=True
        )
        frame.to_csv(opts.csv_path, index=False)

    return EXIT_VALID if results and all(r.valid for r in results) else EXIT_INVALID


def execute(opts: Options, experiments: Sequence[ExperimentBase]) -> int:
    results = []
    for exp in experiments:
        log.debug("running %s", type(exp).__name__)
        results.append(exp.execute(store=opts.store))
    return emit(opts, results)


def from_file(opts: Options, cls, path: str, **options) -> int:
    doc = parse_file(path)
    return execute(opts, cls.from_document(doc, seed=opts.seed, **options))


@click.group()
@click.option("--seed", default=0, type=int, show_default=True, help="Seed for randomised sweeps")
@click.option("--json", "as_json", is_flag=True, help="Print a JSON envelope instead of the report")
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), help="Write the result table here")
@click.option("--store", is_flag=True, help="Also put tables under SILVERLAB_DATAPATH")
@click.option("-v", "--verbose", is_flag=True, help="Debug logging on stderr")
@click.version_option(version=__version__)
@click.pass_context
def cli(ctx, seed, as_json, csv_path, store, verbose):
    """Experiments on Silver conditions, coalitions and welfare relations"""
    logging.basicConfig(format="%(message)s", level=logging.DEBUG if verbose else logging.WARNING)
    ctx.obj = Options(seed, as_json, csv_path, store)


_doc = click.option(
    "-f", "--file", "path", required=True, type=click.Path(exists=True, dir_okay=False),
    help="Scenario document (.svl)",
)


@cli.command()
@click.argument("desc")
@click.option("--horizons", default=None, help="Comma separated values of n, e.g. 10,100,1000")
@click.pass_obj
@handled
def density(opts, desc, horizons):
    """alpha_n of the coalition DESC"""
    a = expression(desc, CoalitionDescriptor)
    return execute(opts, [DensityExperiment(a, _horizons(horizons), seed=opts.seed)])


@cli.command()
@click.argument("desc")
@click.option("--horizon", default=None, type=int, help="Last coordinate scanned")
@click.pass_obj
@handled
def triples(opts, desc, horizon):
    """Consecutive triples inside the coalition DESC"""
    a = expression(desc, CoalitionDescriptor)
    return execute(opts, [TriplesExperiment(a, horizon, seed=opts.seed)])


@cli.command()
@_doc
@click.option("--expect", type=click.Choice(["irrelevant", "relevant"]), default=None)
@click.pass_obj
@handled
def irrelevance(opts, path, expect):
    """Decide irrelevance of a coalition for a choice function"""
    return from_file(opts, IrrelevanceExperiment, path, expect=expect)


@cli.command()
@_doc
@click.option("--family", default=None, help="Family expression, e.g. 'Dplus(0.9)' or 'istar(fin)'")
@click.pass_obj
@handled
def antidem(opts, path, family):
    """Look for an irrelevant coalition in a family of large coalitions"""
    fam = expression(family, CoalitionFamily) if family else None
    return from_file(opts, AntiDemocracyExperiment, path, family=fam)


@cli.command("build-tree")
@click.option("--delta", default="3/4", show_default=True, help="Target splitting ratio")
@click.option("--rounds", default=3, type=int, show_default=True)
@click.option("--oracle", default="ones", show_default=True, help="identity, ones, ones:K, pattern:W, append:W or random")
@click.option("--tree-out", default=None, type=click.Path(dir_okay=False), help="Write the final tree here")
@click.pass_obj
@handled
def build_tree(opts, delta, rounds, oracle, tree_out):
    """Grow a delta-dense Silver tree through dense oracles"""
    oracles = preset_family(oracle, rounds, opts.seed)
    exp = BuildTreeExperiment(oracles, _fraction(delta), rounds, tree_out, seed=opts.seed)
    return execute(opts, [exp])


@cli.command()
@_doc
@click.option("--depth", default=None, type=int, help="Escape and membership depth (60)")
@click.option("--bound", default=None, type=int, help="Stem and value bound of the C_n search")
@click.pass_obj
@handled
def escape(opts, path, depth, bound):
    """A point of the condition outside C_n"""
    return from_file(opts, EscapeExperiment, path, depth=depth, bound=bound)


@cli.command("witness-f")
@_doc
@click.option("--in", "side", flag_value="in", help="Only the point inside F")
@click.option("--out", "side", flag_value="out", help="Only the point outside F")
@click.option("--levels", default=None, type=int, help="Levels checked (5)")
@click.option("--depth", default=None, type=int, help="Stem bound of the refutation (60)")
@click.pass_obj
@handled
def witness_f(opts, path, side, levels, depth):
    """Points of the condition inside and outside F"""
    return from_file(opts, WitnessFExperiment, path, side=side, levels=levels, depth=depth)


@cli.command("swr-witness")
@_doc
@click.option("--case", type=click.Choice(CASES), default=None, help="All cases when omitted")
@click.option("--variant", type=click.Choice(VARIANTS), default=None, help="Both variants when omitted")
@click.option("--delta", default=None, help="Density of the free set, in (2/3, 1]")
@click.option("--cert-out", default=None, type=click.Path(file_okay=False), help="Directory for certificates")
@click.pass_obj
@handled
def swr_witness(opts, path, case, variant, delta, cert_out):
    """Derivation bundles for the welfare relation cases"""
    return from_file(
        opts,
        SwrWitnessExperiment,
        path,
        case=case,
        variant=variant,
        delta=_fraction(delta) if delta else None,
        cert_out=cert_out,
    )


@cli.command("check-cert")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
@handled
def check_cert(opts, path):
    """Replay a derivation certificate"""
    return execute(opts, [CheckCertExperiment(path, seed=opts.seed)])


@cli.command()
@click.option("--meet", "mode", flag_value="meet", default=True, help="Generic stage over dense oracles")
@click.option("--densify", "mode", flag_value="densify", help="Densification audit along a spine map")
@click.option("-f", "--file", "path", default=None, type=click.Path(exists=True, dir_okay=False))
@click.option("--count", default=None, type=int, help="Random oracles to meet (10)")
@click.option("--delta", default=None, help="Target ratio for --densify (3/4)")
@click.pass_obj
@handled
def forcing(opts, mode, path, count, delta):
    """Generic stages and densification on finite trees"""
    delta = _fraction(delta) if delta else None
    if path:
        return from_file(opts, ForcingExperiment, path, mode=mode, count=count, delta=delta)
    exp = ForcingExperiment(mode, count=count, delta=delta or Fraction(3, 4), seed=opts.seed)
    return execute(opts, [exp])


@cli.command()
@_doc
@click.pass_obj
@handled
def monochrome(opts, path):
    """Silver subcylinder on which a K-valued choice function is constant"""
    return from_file(opts, MonochromeExperiment, path)


@cli.command("run")
@_doc
@click.pass_obj
@handled
def run_document(opts, path):
    """Every `run` directive of a scenario document, in order"""
    doc = parse_file(path)
    if not doc.directives:
        raise ScenarioError(f"{path} has no run directives")
    experiments = []
    for d in doc.directives:
        cls = EXPERIMENTS_BY_NAME.get(d.name)
        if cls is None:
            raise ScenarioError(f"line {d.line}: unknown experiment {d.name!r}")
        experiments.append(cls.from_directive(doc, d, seed=opts.seed))
    return execute(opts, experiments)


@cli.command("fmt")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@handled
def fmt(path):
    """Print a scenario document in canonical form"""
    doc: ScenarioDoc = parse_file(path)
    click.echo(doc.to_text(), nl=False)
    return EXIT_VALID


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        code = cli.main(args=list(argv) if argv is not None else None, standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.Abort:
        click.echo("aborted", err=True)
        return EXIT_INVALID
    return code if isinstance(code, int) else EXIT_VALID


def run():
    sys.exit(main())
