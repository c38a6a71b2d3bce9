"""
main.py - Point d'entrée de l'application

Interface en ligne de commande :
    python -m src.main <commande> [options]

Commandes : blocks, fit, return-level, asymptotics, simulate, backtest
Codes de sortie : 0 succès, 2 entrée invalide, 3 échec numérique
"""

import argparse
import sys
import time

import numpy as np

from . import __version__
from .core import asymptotics, frechet, marshall_olkin, returnlevel, simulate
from .core.backtest_manager import BacktestConfig, BacktestManager, prepare_series
from .core.blocks import DEFAULT_TRUNCATION, SCHEMES, SLIDING, block_maxima, left_truncate
from .core.errors import EXIT_INPUT_ERROR, EXIT_OK, InputError, exit_code_for
from .io.config_loader import ConfigLoader, build_model
from .io.data_loader import DataLoader
from .io.logger import Logger
from .numerics.quadrature import AdaptiveQuadrature
from .ui.display import Display
from .ui.output import FORMATS, CommandResult, Output

EXIT_INTERRUPTED = 130


def _comma_list(cast):
    """Type argparse : liste séparée par des virgules ("20,40,80")"""

    def parse(text):
        try:
            values = [cast(part) for part in text.split(",") if part.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError(f"liste invalide : {text!r}")
        if not values:
            raise argparse.ArgumentTypeError("liste vide")
        return values

    return parse


class Application:
    """
    Application principale
    Gère : analyse des arguments, configuration, exécution d'une commande, sortie
    """

    def __init__(self):
        """Initialiser l'application"""
        self.logger = None
        self.parser = self.build_parser()

    # =====================================================================
    # ARGUMENTS
    # =====================================================================

    def build_parser(self):
        """
        Construire l'analyseur d'arguments (sous-commandes)

        Returns:
            argparse.ArgumentParser: Analyseur
        """
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument("--format", choices=FORMATS, default=None,
                            help="Format de sortie (défaut : configuration)")
        common.add_argument("--output", default=None, help="Fichier de sortie (défaut : stdout)")
        common.add_argument("--config", default=None, help="Fichier de configuration JSON")
        common.add_argument("--verbose", action="store_true", help="Logs DEBUG")

        data = argparse.ArgumentParser(add_help=False)
        data.add_argument("--input", required=True, help="Fichier CSV")
        data.add_argument("--column", default=None, help="Colonne : index 0-based ou nom")
        data.add_argument("--header", action="store_true", help="Première ligne = en-tête")
        data.add_argument("--label-column", default=None, help="Colonne d'étiquettes (dates)")

        blocks = argparse.ArgumentParser(add_help=False)
        blocks.add_argument("--scheme", choices=SCHEMES, default=SLIDING)
        blocks.add_argument("--truncation", type=float, default=None, help="Constante c > 0")

        parser = argparse.ArgumentParser(
            prog="sliding-blocks",
            description="Inférence Fréchet sur maxima par blocs glissants et disjoints",
        )
        parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
        sub = parser.add_subparsers(dest="command", required=True)

        p = sub.add_parser("blocks", parents=[common, data, blocks], help="Extraire les maxima par blocs")
        p.add_argument("--block-size", type=int, required=True)
        p.set_defaults(handler=self.run_blocks)

        p = sub.add_parser("fit", parents=[common, data, blocks], help="Ajuster la loi de Fréchet")
        p.add_argument("--block-size", type=int, default=None,
                       help="Taille de bloc (absent : l'entrée est déjà un échantillon de maxima)")
        p.add_argument("--confidence", type=float, default=None)
        p.set_defaults(handler=self.run_fit)

        p = sub.add_parser("return-level", parents=[common, data, blocks], help="Niveaux de retour")
        p.add_argument("--block-size", type=int, default=None)
        p.add_argument("-T", dest="T", type=_comma_list(float), required=True, help="Périodes (ex : 50,100)")
        p.add_argument("--confidence", type=float, default=None)
        p.add_argument("--oracle-alpha", type=float, default=None, help="α₀ fixé dans β et Σ")
        p.set_defaults(handler=self.run_return_level)

        p = sub.add_parser("asymptotics", parents=[common], help="Matrices et constantes asymptotiques")
        p.add_argument("--alpha", type=float, default=1.0)
        p.add_argument("--table1", action="store_true", help="Grille des variances du niveau de retour")
        p.add_argument("--verify", action="store_true", help="Formes closes vs quadrature vs Monte Carlo")
        p.add_argument("--rho", type=float, default=None)
        p.add_argument("--lambda", dest="lam", type=float, default=None)
        p.add_argument("--draws", type=int, default=None, help="Tirages de l'oracle (0 : aucun)")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--workers", type=int, default=None)
        p.set_defaults(handler=self.run_asymptotics)

        p = sub.add_parser("simulate", parents=[common], help="Étude Monte Carlo")
        p.add_argument("--model", choices=simulate.FAMILIES, default="iid")
        p.add_argument("--dist", choices=simulate.INNOVATIONS, default="frechet")
        p.add_argument("--alpha", type=float, default=1.0)
        p.add_argument("--beta", type=float, default=0.0)
        p.add_argument("--n", type=int, default=None)
        p.add_argument("--reps", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--grid", type=_comma_list(int), default=None, help="Tailles effectives m")
        p.add_argument("--estimators", type=_comma_list(str), default=None)
        p.add_argument("--truncation", type=float, default=None)
        p.add_argument("--workers", type=int, default=None)
        p.add_argument("--trajectory", action="store_true", help="α̂ en fonction de r sur une série")
        p.add_argument("--m-range", type=_comma_list(int), default=[16, 250])
        p.set_defaults(handler=self.run_simulate)

        p = sub.add_parser("backtest", parents=[common, data], help="Backtest des niveaux de retour")
        p.add_argument("--window", type=int, default=None)
        p.add_argument("--step", type=int, default=None)
        p.add_argument("--block-size", type=int, default=None)
        p.add_argument("-T", dest="T", type=_comma_list(float), default=None)
        p.add_argument("--sign", choices=("positive", "negative"), default=None)
        p.add_argument("--series-type", choices=("prices", "returns"), default="prices")
        p.add_argument("--confidence", type=float, default=None)
        p.add_argument("--truncation", type=float, default=None)
        p.set_defaults(handler=self.run_backtest)

        return parser

    # =====================================================================
    # CONFIGURATION
    # =====================================================================

    def load_configuration(self, args):
        """
        Charger la configuration et configurer le logging

        Raises:
            InputError: Si fichier de configuration absent ou invalide
        """
        ConfigLoader.load(args.config)
        Logger.configure(
            level="DEBUG" if args.verbose else ConfigLoader.get_logging_level(),
            to_file=ConfigLoader.is_file_logging(),
        )
        self.logger = Logger.get_logger("app")

    def _load_series(self, args):
        series = DataLoader.ingest_csv(
            args.input, column=args.column, has_header=args.header, label_column=args.label_column
        )
        self.logger.info("serie_chargee", path=args.input, n=series.n)
        return series

    @staticmethod
    def _truncation(args):
        if args.truncation is not None:
            return args.truncation
        return ConfigLoader.get_truncation() or DEFAULT_TRUNCATION

    @staticmethod
    def _confidence(args):
        return args.confidence if args.confidence is not None else ConfigLoader.get_confidence()

    def _fit(self, args, series):
        """Ajustement sur les maxima de la série, ou sur la série si --block-size absent"""
        c = self._truncation(args)
        if args.block_size is None:
            sample = np.maximum(series.values, c)
        else:
            sample = left_truncate(block_maxima(series, args.block_size, args.scheme), c)
        return frechet.fit(sample, **ConfigLoader.get_solver_settings())

    # =====================================================================
    # COMMANDES
    # =====================================================================

    def run_blocks(self, args):
        """Maxima par blocs (colonne unique "maxima", relisible par fit)"""
        series = self._load_series(args)
        sample = block_maxima(series, args.block_size, args.scheme)
        if args.truncation is not None:
            sample = left_truncate(sample, args.truncation)

        def render(stream):
            Display.print_section(f"MAXIMA PAR BLOCS ({sample.scheme}, r={sample.r})", stream=stream)
            Display.print_key_values({
                "n": sample.n,
                "maxima": sample.maxima.size,
                "k (glissants)": sample.k,
                "m (disjoints)": sample.m,
                "troncature": sample.truncation,
                "min": float(sample.maxima.min()),
                "médiane": float(np.median(sample.maxima)),
                "max": float(sample.maxima.max()),
            }, stream=stream)

        return CommandResult(
            payload=sample.to_dict(),
            rows=[{"maxima": value} for value in sample.maxima.tolist()],
            columns=["maxima"],
            render=render,
        )

    def run_fit(self, args):
        """Ajustement Fréchet et intervalles des paramètres"""
        series = self._load_series(args)
        fit = self._fit(args, series)
        intervals = returnlevel.parameter_ci(fit, level=self._confidence(args), scheme=args.scheme)

        row = fit.to_dict()
        solver = row.pop("solver")
        row.update(iterations=solver["iterations"], residual=solver["residual"])
        row.update({k: v for k, v in intervals.to_dict().items() if k not in ("alpha", "sigma", "scheme")})

        def render(stream):
            Display.print_section("AJUSTEMENT FRÉCHET", stream=stream)
            Display.print_key_values({
                "α̂": fit.params.alpha,
                "σ̂": fit.params.sigma,
                "k": fit.k,
                "schéma": fit.scheme or "échantillon",
                "r": fit.r,
                "m effectif": fit.m_effective,
                f"α IC {intervals.level:.0%}": f"[{intervals.alpha_low:.6g}, {intervals.alpha_high:.6g}]",
                f"σ IC {intervals.level:.0%}": f"[{intervals.sigma_low:.6g}, {intervals.sigma_high:.6g}]",
                "itérations": fit.solver.iterations,
                "résidu": fit.solver.residual,
            }, stream=stream)

        payload = fit.to_dict()
        payload["intervals"] = intervals.to_dict()
        return CommandResult(payload=payload, rows=[row], columns=list(row), render=render)

    def run_return_level(self, args):
        """RL̂(T, r) et intervalles de confiance"""
        series = self._load_series(args)
        fit = self._fit(args, series)
        level = self._confidence(args)
        estimates = [
            returnlevel.ci(fit, T, alpha0_for_variance=args.oracle_alpha, level=level, scheme=args.scheme)
            for T in args.T
        ]
        rows = [e.to_dict() for e in estimates]
        columns = ["T", "point", "ci_low", "ci_high", "variance_factor", "m_effective", "scheme", "level", "alpha0"]

        def render(stream):
            Display.print_section(
                f"NIVEAUX DE RETOUR (α̂={fit.params.alpha:.4g}, σ̂={fit.params.sigma:.4g})", stream=stream
            )
            Display.print_table(
                ["T", "RL", "IC bas", "IC haut", "βᵀΣβ"],
                [[e.T, e.point, e.ci_low, e.ci_high, e.variance_factor] for e in estimates],
                stream=stream,
            )

        return CommandResult(
            payload={"fit": fit.to_dict(), "return_levels": rows},
            rows=rows,
            columns=columns,
            render=render,
        )

    def run_asymptotics(self, args):
        """Σ_Y, M, Σ, I⁻¹, rapports ; options : grille, biais, vérification"""
        alpha0 = args.alpha
        tables = asymptotics.asymptotic_tables(alpha0)
        payload = tables.to_dict()
        rows = []

        for name in ("M", "sigma_Y", "sigma_sliding", "fisher_inv_disjoint"):
            matrix = getattr(tables, name)
            for (i, j), value in np.ndenumerate(matrix):
                rows.append({"quantity": name, "i": i, "j": j, "value": value})
        for i, value in enumerate(tables.diagonal_ratios()):
            rows.append({"quantity": "diagonal_ratio", "i": i, "j": None, "value": value})
        for i, value in enumerate(asymptotics.ratio_bounds(alpha0)):
            rows.append({"quantity": "ratio_bound", "i": i, "j": None, "value": value})

        grid = None
        if args.table1:
            grid = returnlevel.variance_table(alpha0)
            payload["table1"] = grid
            for row in grid:
                for key in ("sliding", "disjoint", "ratio"):
                    rows.append({"quantity": f"table1_{key}", "i": row["T"], "j": None, "value": row[key]})

        bias = None
        if (args.rho is None) != (args.lam is None):
            raise InputError("--rho et --lambda doivent être fournis ensemble")
        if args.rho is not None:
            bias = asymptotics.bias_iid(alpha0, args.rho, args.lam)
            payload["bias"] = bias.to_dict()
            rows.append({"quantity": "bias", "i": 0, "j": None, "value": bias.shape})
            rows.append({"quantity": "bias", "i": 1, "j": None, "value": bias.scale})

        report = None
        if args.verify:
            simulation = ConfigLoader.get_simulation()
            draws = args.draws if args.draws is not None else simulation.get("oracle_draws", 1_000_000)
            report = marshall_olkin.verification_table(
                alpha0=alpha0,
                draws=draws,
                seed=args.seed if args.seed is not None else simulation.get("seed", 0),
                workers=args.workers or ConfigLoader.get_workers(),
                inner=AdaptiveQuadrature(**ConfigLoader.get_quadrature_settings()),
            )
            payload["verification"] = report.to_dict()
            for row in report.rows:
                for key in ("closed", "quadrature", "abs_diff"):
                    rows.append({"quantity": f"verify_{key}", "i": row["case"], "j": None, "value": row[key]})
            if report.oracle is not None:
                for (i, j), value in np.ndenumerate(report.oracle.estimate):
                    rows.append({"quantity": "oracle_estimate", "i": i, "j": j, "value": value})
                for (i, j), value in np.ndenumerate(report.oracle.stderr):
                    rows.append({"quantity": "oracle_stderr", "i": i, "j": j, "value": value})

        def render(stream):
            Display.print_banner(ConfigLoader.get_app_name(), f"Constantes asymptotiques, α₀ = {alpha0:g}",
                                 stream=stream)
            Display.print_matrix("Σ_Y", tables.sigma_Y, stream=stream)
            Display.print_matrix("M", tables.M, stream=stream)
            Display.print_matrix("Σ (sliding)", tables.sigma_sliding, stream=stream)
            Display.print_matrix("I⁻¹ (disjoint)", tables.fisher_inv_disjoint, stream=stream)
            Display.print_section("Rapports de variances", stream=stream)
            shape_ratio, scale_ratio = tables.diagonal_ratios()
            low, high = asymptotics.ratio_bounds(alpha0)
            Display.print_key_values({
                "forme": shape_ratio,
                "échelle": scale_ratio,
                "borne basse": low,
                "borne haute": high,
            }, digits=4, stream=stream)
            if grid is not None:
                Display.print_section("Variance asymptotique du niveau de retour", stream=stream)
                Display.print_table(
                    ["T", "sliding", "disjoint", "rapport"],
                    [[row["T"], row["sliding"], row["disjoint"], row["ratio"]] for row in grid],
                    digits=5, stream=stream,
                )
            if bias is not None:
                Display.print_section(f"Biais (ρ={bias.rho:g}, λ={bias.lam:g})", stream=stream)
                Display.print_key_values({"forme": bias.shape, "échelle": bias.scale}, stream=stream)
            if report is not None:
                Display.print_section("Vérification des intégrales en ξ", stream=stream)
                Display.print_table(
                    ["cas", "forme close", "quadrature", "écart"],
                    [[row["case"], row["closed"], row["quadrature"], row["abs_diff"]] for row in report.rows],
                    digits=12, stream=stream,
                )
                Display.print_key_values({"écart max": report.max_deviation}, digits=3, stream=stream)
                if report.oracle is not None:
                    Display.print_matrix(f"Σ_Y Monte Carlo ({report.oracle.draws} tirages)",
                                         report.oracle.estimate, stream=stream)
                    Display.print_matrix("Erreurs standard", report.oracle.stderr, stream=stream)

        return CommandResult(
            payload=payload,
            rows=rows,
            columns=["quantity", "i", "j", "value"],
            render=render,
            seed=args.seed if args.verify else None,
        )

    def run_simulate(self, args):
        """Étude Monte Carlo (ou trajectoire α̂(r) avec --trajectory)"""
        settings = ConfigLoader.get_simulation()
        n = args.n if args.n is not None else settings.get("n", 1000)
        seed = args.seed if args.seed is not None else settings.get("seed", 0)
        spec = build_model(
            simulate.GeneratorSpec,
            family=args.model,
            innovation=args.dist,
            alpha=args.alpha,
            beta=args.beta,
            burn_in=settings.get("burn_in", 200),
        )
        solver = ConfigLoader.get_solver_settings()
        truncation = args.truncation or ConfigLoader.get_truncation()

        if args.trajectory:
            return self._run_trajectory(args, spec, n, seed, truncation, solver)

        config = build_model(
            simulate.McConfig,
            n=n,
            estimators=args.estimators or list(simulate.ESTIMATORS),
            grid=args.grid or settings.get("grid", [40]),
            reps=args.reps if args.reps is not None else settings.get("reps", 3000),
            seed=seed,
            truncation=truncation,
            failure_threshold=settings.get("failure_threshold", 0.01),
            workers=args.workers or ConfigLoader.get_workers(),
        )
        result = simulate.run_mc(config, spec, solver)

        ratios = {}
        if {SLIDING, "disjoint"} <= set(config.estimators):
            ratios = {m: result.variance_ratio(m) for m in config.grid}

        def render(stream):
            Display.print_section(
                f"MONTE CARLO : {spec.family} {spec.innovation} α={spec.alpha:g} β={spec.beta:g}, "
                f"n={config.n}, {config.reps} réplications",
                stream=stream,
            )
            Display.print_table(
                ["estimateur", "m", "r", "moyenne", "biais²", "variance", "MSE", "échecs", "valide"],
                [[c.estimator, c.m, c.r, c.mean, c.bias2, c.variance, c.mse, c.failures, c.valid]
                 for c in result.cells],
                digits=5, stream=stream,
            )
            if ratios:
                Display.print_key_values(
                    {f"Var sliding / Var disjoint (m={m})": ratio for m, ratio in ratios.items()},
                    digits=4, stream=stream,
                )

        return CommandResult(
            payload={"cells": result.to_rows(), "variance_ratios": ratios, "metadata": result.metadata},
            rows=result.to_rows(),
            columns=list(simulate.McResult.COLUMNS),
            render=render,
            seed=seed,
            extra_meta=result.metadata,
        )

    def _run_trajectory(self, args, spec, n, seed, truncation, solver):
        if len(args.m_range) != 2:
            raise InputError(f"--m-range attend deux entiers (min,max) : {args.m_range}")
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
        series = simulate.generate(rng, spec, n)
        r_grid = simulate.unique_block_sizes(n, *args.m_range)
        rows = simulate.trajectory(series, r_grid, truncation, solver)
        columns = ["r", "m", *simulate.ESTIMATORS]

        def render(stream):
            Display.print_section(f"TRAJECTOIRE α̂(r), n={n}, {len(r_grid)} tailles de bloc", stream=stream)
            Display.print_table(columns, [[row[c] for c in columns] for row in rows], digits=4, stream=stream)

        return CommandResult(payload={"rows": rows}, rows=rows, columns=columns, render=render, seed=seed)

    def run_backtest(self, args):
        """Backtest glissant des niveaux de retour"""
        defaults = ConfigLoader.get_backtest()
        series = self._load_series(args)
        sign = args.sign or defaults.get("sign", "negative")
        config = build_model(
            BacktestConfig,
            window=args.window or defaults.get("window", 2500),
            r=args.block_size or defaults.get("r", 62),
            step=args.step,
            T_list=args.T or defaults.get("T_list", [20, 40, 80]),
            sign=sign,
            level=self._confidence(args),
            truncation=args.truncation or ConfigLoader.get_truncation(),
        )
        prepared = prepare_series(series, args.series_type, sign)
        report = BacktestManager(prepared, config, ConfigLoader.get_solver_settings()).run()

        def render(stream):
            Display.print_section(
                f"BACKTEST : fenêtre {config.window}, r={config.r}, pas {config.effective_step}, "
                f"{len(report.rolls)} roulements ({report.failed} échoués)",
                stream=stream,
            )
            Display.print_table(
                ["T", "dépassements", "attendus", "bande 99%", "dans la bande"],
                [[T, t["exceedances"], t["expected"], f"[{t['band_low']}, {t['band_high']}]", t["within_band"]]
                 for T, t in report.totals.items()],
                digits=4, stream=stream,
            )

        return CommandResult(payload=report.to_dict(), rows=report.to_rows(), columns=report.columns(),
                             render=render)

    # =====================================================================
    # EXÉCUTION
    # =====================================================================

    def emit(self, args, result):
        """Écrire le résultat dans le format demandé"""
        echo = {k: v for k, v in vars(args).items() if k != "handler"}
        echo["solver"] = ConfigLoader.get_solver_settings()
        meta = Output.make_meta(
            tool=ConfigLoader.get_app_name(),
            version=__version__,
            command=args.command,
            config=echo,
            seed=result.seed,
            extra=result.extra_meta,
        )
        Output.emit(
            result,
            args.format or ConfigLoader.get_output_format(),
            meta,
            output=args.output,
            indent=ConfigLoader.get_json_indent(),
        )

    def run(self, argv=None):
        """
        Exécuter une commande

        Args:
            argv (list|None): Arguments (défaut : sys.argv[1:])

        Returns:
            int: Code de sortie (0, 2 ou 3)
        """
        try:
            args = self.parser.parse_args(argv)
        except SystemExit as e:
            return EXIT_OK if not e.code else EXIT_INPUT_ERROR

        start = time.perf_counter()
        try:
            self.load_configuration(args)
            Logger.log_execution(args.command, "start")
            result = args.handler(args)
            self.emit(args, result)
        except KeyboardInterrupt:
            Display.print_warning("Interrompu par l'utilisateur", stream=sys.stderr)
            return EXIT_INTERRUPTED
        except Exception as e:
            Logger.log_execution(args.command, "error", time.perf_counter() - start)
            Display.print_error(str(e))
            return exit_code_for(e)

        Logger.log_execution(args.command, "end", time.perf_counter() - start)
        return EXIT_OK


def main(argv=None):
    """Point d'entrée console"""
    return Application().run(argv)


if __name__ == "__main__":
    sys.exit(main())
