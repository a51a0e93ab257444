"""Acceptance suite: cross-checks every computation path against its oracle."""

import json
import math
import sys
import time
import warnings
from dataclasses import asdict, dataclass

import numpy as np

import config
from errors import TruncationWarning
from kernel_engine import (
    build_correction_grid,
    clear_engines,
    full_kernel,
    get_engine,
    kernel_values,
    t0_eval,
    tke_residual,
)
from operator_assembly import Wavefunction, assemble, expectation_complex, free_gaussian_arrival, hermiticity_defect
from potential import PotentialSeries, free_particle, harmonic
from quartic_reference import QuarticParams, t0, t1, t2, t3, tau_classical
from series_oracle import build_alpha, build_alpha_orders, series_kernel_eval
from wigner import classical_toa, hbar0_coefficients, hbar_scaling_check, ltoa_coefficients, wigner_of_series


@dataclass
class CheckResult:
    name: str
    measured: float
    expected: float
    tol: float
    passed: bool
    seconds: float = 0.0
    detail: str = ""


def _relative(a, b):
    return abs(a - b) / abs(b)


class AcceptanceSuite:
    """Runs the named acceptance checks and collects a JSON-ready report."""

    def __init__(self, seed: int = config.VERIFY_SEED):
        self.seed = seed
        self.params = QuarticParams()
        self.quartic = self.params.potential()
        self.results = []
        self.checks = {
            "free-kernel": self.check_free_kernel,
            "linear-vanishing": self.check_linear_vanishing,
            "quartic-t0": self.check_quartic_t0,
            "quartic-corrections": self.check_quartic_corrections,
            "tke-residual": self.check_tke_residual,
            "series-oracle": self.check_series_oracle,
            "classical-toa": self.check_classical_toa,
            "hbar-scaling": self.check_hbar_scaling,
            "classical-limit": self.check_classical_limit,
            "operator-hermiticity": self.check_operator,
            "ordering": self.check_ordering,
            "symmetry": self.check_symmetry,
        }

    def rng(self):
        return np.random.default_rng(self.seed)

    def check_free_kernel(self) -> CheckResult:
        lattice = np.linspace(0.0, 2.0, 21)
        uu, vv = np.meshgrid(lattice, lattice, indexing="ij")
        worst = 0.0
        for n_max in range(4):
            values = kernel_values(free_particle(), n_max, uu, vv)
            worst = max(worst, float(np.max(np.abs(values - uu / 4.0))))
        return CheckResult("free-kernel", worst, 0.0, 1e-13, worst <= 1e-13)

    def check_linear_vanishing(self) -> CheckResult:
        V = PotentialSeries((1.0, 1.0))
        worst = 0.0
        for n in (1, 2):
            grid = build_correction_grid(V, n, 1.0, 1.0, nodes=21)
            worst = max(worst, float(np.max(np.abs(grid.values))))
        return CheckResult("linear-vanishing", worst, 0.0, 1e-12, worst <= 1e-12)

    def check_quartic_t0(self) -> CheckResult:
        rng = self.rng()
        worst = 0.0
        count = 0
        while count < 50:
            u, v = rng.uniform(0.05, 3.0, size=2)
            if self.params.argument(u, v) > 10.0:
                continue
            count += 1
            worst = max(worst, _relative(t0_eval(self.quartic, u, v).value, t0(self.params, u, v)))
        return CheckResult("quartic-t0", worst, 0.0, 1e-8, worst <= 1e-8, detail="50 points, eta u^4 v^2 <= 10")

    def check_quartic_corrections(self) -> CheckResult:
        engine = get_engine(self.quartic, 1.0, 1.0, nodes=15)
        details = []
        passed = True
        worst_ratio = 0.0
        for n, closed, tol in ((1, t1, 1e-6), (2, t2, 1e-5), (3, t3, 1e-5)):
            grid = engine.grid(n)
            uu, vv = np.meshgrid(grid.u_nodes, grid.v_nodes, indexing="ij")
            reference = np.vectorize(lambda u, v: closed(self.params, u, v))(uu, vv)
            mask = np.abs(reference) > 1e-12
            error = float(np.max(np.abs(grid.values[mask] - reference[mask]) / np.abs(reference[mask])))
            details.append(f"T{n}: {error:.2e}")
            passed = passed and error <= tol
            worst_ratio = max(worst_ratio, error / tol)
        return CheckResult("quartic-corrections", worst_ratio, 0.0, 1.0, passed, detail="; ".join(details))

    def check_tke_residual(self) -> CheckResult:
        residuals = []
        for n_max in range(4):
            kernel = lambda u, v, n=n_max: full_kernel(self.quartic, n, u, v).value
            residuals.append(abs(tke_residual(self.quartic, kernel, 0.8, 0.8)))
        monotone = all(b < a for a, b in zip(residuals, residuals[1:]))
        ratio = residuals[3] / residuals[0]
        return CheckResult(
            "tke-residual", ratio, 0.0, 1e-3, monotone and ratio <= 1e-3,
            detail=", ".join(f"{r:.3e}" for r in residuals),
        )

    def check_series_oracle(self) -> CheckResult:
        table = build_alpha(self.quartic, 32, 32, exact=True)
        rng = self.rng()
        worst = 0.0
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TruncationWarning)
            for u, v in rng.uniform(-0.5, 0.5, size=(25, 2)):
                series = series_kernel_eval(table, u, v).value
                worst = max(worst, abs(full_kernel(self.quartic, 3, u, v).value - series))
        return CheckResult("series-oracle", worst, 0.0, 1e-8, worst <= 1e-8)

    def check_classical_toa(self) -> CheckResult:
        sho = abs(classical_toa(harmonic(1.0), -1.0, 1.0) - math.pi / 4.0)
        rng = self.rng()
        worst = 0.0
        for q, p in zip(rng.uniform(-1.5, -0.1, 20), rng.uniform(0.5, 3.0, 20)):
            worst = max(worst, _relative(classical_toa(self.quartic, q, p), tau_classical(self.params, q, p)))
        return CheckResult(
            "classical-toa", max(sho / 1e-9, worst / 1e-8), 0.0, 1.0, sho <= 1e-9 and worst <= 1e-8,
            detail=f"harmonic |error|={sho:.2e}; quartic max rel={worst:.2e}",
        )

    def check_hbar_scaling(self) -> CheckResult:
        deviations = [abs(hbar_scaling_check(self.quartic, n, 1.0, 0.5, -1.0, 10.0) - 2 * n) for n in (1, 2, 3)]
        worst = max(deviations)
        return CheckResult("hbar-scaling", worst, 0.0, 1e-6, worst <= 1e-6)

    def check_classical_limit(self) -> CheckResult:
        j_max, m_max = 4, 20
        table = build_alpha_orders(self.quartic, m_max, j_max + 1)
        series = wigner_of_series(table, self.quartic.mass, self.quartic.hbar, order=0)
        measured = hbar0_coefficients(series, j_max, m_max)
        worst = 0.0
        for k, poly in enumerate(ltoa_coefficients(self.quartic, j_max)):
            expected = np.zeros(m_max + 1)
            expected[: min(len(poly), m_max + 1)] = poly[: m_max + 1]
            scale = float(np.max(np.abs(expected)))
            worst = max(worst, float(np.max(np.abs(measured[k] - expected))) / scale)
        return CheckResult("classical-limit", worst, 0.0, 1e-10, worst <= 1e-10)

    def check_operator(self) -> CheckResult:
        K = assemble(self.quartic, 1, 1.0, 60)
        defect = hermiticity_defect(K)
        psi = Wavefunction.gaussian(K.grid, -0.3, 5.0, 0.15)
        value = expectation_complex(K, psi)
        residue = abs(value.imag) / abs(value.real)

        free = free_particle()
        K_free = assemble(free, 0, 20.0, 400)
        packet = Wavefunction.gaussian(K_free.grid, -3.0, 2.0, 2.0)
        arrival = expectation_complex(K_free, packet).real
        oracle = free_gaussian_arrival(free.mass, free.hbar, -3.0, 2.0, 2.0)
        passed = (
            defect <= 1e-14 and residue <= 1e-10
            and _relative(arrival, 1.5) <= 0.10 and _relative(arrival, oracle) <= 0.02
        )
        return CheckResult(
            "operator-hermiticity", defect, 0.0, 1e-14, passed,
            detail=f"imag residue={residue:.2e}; free packet <T>={arrival:.5f} (oracle {oracle:.5f})",
        )

    def check_ordering(self) -> CheckResult:
        engine = get_engine(self.quartic, 1.0, 1.0)
        magnitudes = [abs(t0_eval(self.quartic, 1.0, 1.0).value)]
        magnitudes += [abs(engine.correction(n, 1.0, 1.0)) for n in (1, 2, 3)]
        ordered = all(b < a for a, b in zip(magnitudes, magnitudes[1:]))
        return CheckResult(
            "ordering", magnitudes[3] / magnitudes[0], 0.0, 1.0, ordered,
            detail=", ".join(f"{m:.6e}" for m in magnitudes),
        )

    def check_symmetry(self) -> CheckResult:
        rng = self.rng()
        worst = 0.0
        for _ in range(200):
            V = PotentialSeries(tuple(rng.uniform(-1.0, 1.0, size=4)))
            u, v = rng.uniform(0.0, 1.0, size=2)
            plus = full_kernel(V, 1, u, v, nodes=11).value
            minus = full_kernel(V, 1, u, -v, nodes=11).value
            worst = max(worst, abs(plus - minus))
        clear_engines()
        return CheckResult("symmetry", worst, 0.0, 1e-12, worst <= 1e-12, detail="200 random cubic-quartic potentials")

    def run(self, only: list = None) -> list:
        """Run every check (or the named subset) and print one line per check."""
        names = list(self.checks) if not only else only
        unknown = [n for n in names if n not in self.checks]
        if unknown:
            raise KeyError(f"unknown checks: {', '.join(unknown)}")

        print("\n" + "=" * 60, file=sys.stderr)
        print("ACCEPTANCE SUITE", file=sys.stderr)
        print("=" * 60, file=sys.stderr)
        self.results = []
        for name in names:
            start = time.perf_counter()
            result = self.checks[name]()
            result.seconds = round(time.perf_counter() - start, 3)
            self.results.append(result)
            status = "PASS" if result.passed else "FAIL"
            print(
                f"  [{status}] {name:<22} measured={result.measured:.3e} "
                f"tol={result.tol:.1e}  ({result.seconds}s)",
                file=sys.stderr,
            )
            if result.detail:
                print(f"         {result.detail}", file=sys.stderr)
        return self.results

    @property
    def passed(self) -> bool:
        return bool(self.results) and all(r.passed for r in self.results)

    def report(self) -> dict:
        return {
            "suite": "toakernel-acceptance",
            "seed": self.seed,
            "passed": self.passed,
            "checks": [asdict(r) for r in self.results],
        }

    def export_json(self, filepath: str = None) -> str:
        text = json.dumps(self.report(), indent=2)
        if filepath:
            with open(filepath, "w", encoding="utf-8") as f:
                f.write(text + "\n")
        return text
