//! Acceptance criteria, one verdict line each. Exits nonzero if any fails.

use std::path::Path;
use std::process::{Command, ExitCode};

use deterrence_core::oracle::{oracle_spne, oracle_subgame_profit};
use deterrence_core::{EntrantBranch, GridSpec, Market, ModelParams, Regime, UpperRoot};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    pass: bool,
    detail: String,
    notes: Vec<String>,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
            notes: Vec::new(),
        }
    }
}

fn draw(rng: &mut ChaCha8Rng) -> Market {
    let alpha = rng.gen_range(4.0..20.0);
    let c = rng.gen_range(0.0..0.75 * alpha);
    let beta = rng.gen_range(0.5..3.0);
    let theta = rng.gen_range(0.05..1.95) * beta;
    let phi = if rng.gen_bool(0.1) {
        0.0
    } else {
        rng.gen_range(0.0..0.97) * theta
    };
    Market::new(ModelParams::new(alpha, beta, theta, phi, c)).expect("valid draw")
}

fn draws(seed: u64, n: usize) -> Vec<Market> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| draw(&mut rng)).collect()
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| lo + (hi - lo) * (k as f64 / (n - 1) as f64))
}

fn figure_one() -> Verdict {
    let m = Market::reference();
    let k = m.derived_constants();
    let regions = m.entry_regions(5.0).unwrap();
    let x_low = regions.x_low.unwrap();
    let x_high = regions.x_high.and_then(UpperRoot::finite).unwrap();
    let peak = m.entrant_profit_peak().unwrap();
    let checks = [
        ("x_low", x_low, (6.0 - 6f64.sqrt()) / 3.0),
        ("x_high", x_high, 16.0 - 4.0 * 10f64.sqrt()),
        ("x_tilde", k.x_tilde, 16.0 / 7.0),
        ("peak_x", peak.x, 2.0),
        ("peak_profit", peak.profit, 6.0),
        ("r_bar", k.r_bar, 16.0 / 3.0),
    ];
    let worst = checks
        .iter()
        .map(|(_, got, want)| (got - want).abs())
        .fold(0.0, f64::max);
    let ticks = (x_low - 1.2).abs() <= 0.02 && (x_high - 3.35).abs() <= 0.02;
    Verdict::new(
        worst <= 1e-9 && ticks,
        format!("max closed-form error {worst:.1e}; ticks x_low={x_low:.4} x_high={x_high:.4}"),
    )
}

fn advantage_sweep(markets: &[Market]) -> Verdict {
    let mut min_adv = f64::INFINITY;
    let mut max_at_zero = 0.0f64;
    for m in markets {
        let top = m.derived_constants().pi_e_max;
        for r in linspace(0.0, top, 1000) {
            let adv = m.profit_advantage(r).unwrap().value;
            min_adv = min_adv.min(adv);
            if r == 0.0 {
                max_at_zero = max_at_zero.max(adv.abs());
            }
        }
    }
    Verdict::new(
        min_adv >= -1e-12 && max_at_zero <= 1e-9,
        format!("min advantage {min_adv:.3e}; max |advantage(0)| {max_at_zero:.1e}"),
    )
}

fn closer_root_wins(markets: &[Market]) -> Verdict {
    let (mut tested, mut violations) = (0usize, 0usize);
    for m in markets {
        let k = m.derived_constants();
        for i in 1..=1000 {
            let r = k.r_bar * (i as f64 / 1001.0);
            let reg = m.entry_regions(r).unwrap();
            let (Some(x_low), Some(UpperRoot::Finite(x_high))) = (reg.x_low, reg.x_high) else {
                continue;
            };
            tested += 1;
            if k.x_monopoly - x_low >= x_high - k.x_monopoly {
                violations += 1;
            }
        }
    }
    Verdict::new(
        violations == 0 && tested > 0,
        format!("{tested} cases, {violations} violations"),
    )
}

fn smoothness(markets: &[Market]) -> Verdict {
    let h = 1e-5;
    let (mut value_gap, mut slope_gap) = (0.0f64, 0.0f64);
    let mut fd_gap = 0.0f64;
    let mut fd_vs_predicted = 0.0f64;
    let reference = Market::reference();
    let mut reference_fd = 0.0;
    for (i, m) in std::iter::once(&reference).chain(markets).enumerate() {
        let k = m.derived_constants();
        let p = m.params();
        let xt = k.x_tilde;
        let lv = m.entrant_branch_profit(EntrantBranch::Limit, xt);
        let mv = m.entrant_branch_profit(EntrantBranch::Monopoly, xt);
        let ls = m.entrant_branch_slope(EntrantBranch::Limit, xt);
        let ms = m.entrant_branch_slope(EntrantBranch::Monopoly, xt);
        value_gap = value_gap.max((lv - mv).abs());
        slope_gap = slope_gap.max((ls - ms).abs());
        let fd =
            (m.entrant_gross_profit(xt + h).unwrap() - m.entrant_gross_profit(xt - h).unwrap()) / (2.0 * h);
        let err = (fd - ls).abs().max((fd - ms).abs());
        fd_gap = fd_gap.max(err);
        // Curvature jumps across the crossover, giving the central difference
        // a first-order bias of h/4 times the jump.
        let jump = p.phi * p.phi / (2.0 * p.beta) + 2.0 * p.theta * (p.theta - p.phi) / p.beta;
        fd_vs_predicted = fd_vs_predicted.max((fd - (ls + h * jump / 4.0)).abs());
        if i == 0 {
            reference_fd = err;
        }
    }
    let mut v = Verdict::new(
        value_gap <= 1e-9 && slope_gap <= 1e-9 && fd_gap <= 1e-6,
        format!(
            "value gap {value_gap:.1e}, slope gap {slope_gap:.1e}, central difference gap {fd_gap:.2e} \
             (reference market {reference_fd:.2e})"
        ),
    );
    v.notes.push(format!(
        "central difference minus (slope + h * curvature jump / 4): max {fd_vs_predicted:.1e}"
    ));
    v
}

fn subgame_oracle(markets: &[Market]) -> Verdict {
    let (mut cases, mut failures) = (0usize, 0usize);
    let mut worst_ratio = 0.0f64;
    let mut max_incumbent = 0.0f64;
    for m in markets {
        let grid = GridSpec::for_market(m);
        let upper = m.x_entrant_exhausted().map_or(m.x_cap(), |e| e.min(m.x_cap()));
        for i in 1..=100 {
            let x = upper * (i as f64 / 101.0);
            let closed = m.price_equilibrium(x).unwrap();
            let check = oracle_subgame_profit(m, x, &grid).unwrap();
            let tol = 5.0 * grid.price_step * closed.q_entrant;
            let diff = (check.report.brute_force_value - closed.profit_entrant).abs();
            cases += 1;
            worst_ratio = worst_ratio.max(diff / tol);
            max_incumbent = max_incumbent.max(check.incumbent_profit.abs());
            if diff > tol || check.incumbent_profit != 0.0 {
                failures += 1;
            }
        }
    }
    Verdict::new(
        failures == 0,
        format!("{cases} cases, {failures} failures, worst diff/tol {worst_ratio:.3}, max incumbent profit {max_incumbent}"),
    )
}

fn regime_map(markets: &[Market]) -> Verdict {
    let (mut cases, mut regime_miss, mut x_miss) = (0usize, 0usize, 0usize);
    for m in markets {
        let grid = GridSpec::for_market(m);
        let top = 1.2 * m.derived_constants().pi_e_max;
        for r in linspace(0.0, top, 121) {
            let s = oracle_spne(m, r, &grid).unwrap();
            let solved = m.solve(r).unwrap();
            cases += 1;
            if s.oracle_regime != solved.regime {
                regime_miss += 1;
            }
            if (s.oracle_x - solved.x_star).abs() > 2.0 * grid.output_step {
                x_miss += 1;
            }
        }
    }
    let reference = Market::reference();
    let grid = GridSpec::for_market(&reference);
    let below = reference.solve(5.333).unwrap().regime;
    let above = reference.solve(5.334).unwrap().regime;
    let oracle_below = oracle_spne(&reference, 5.333, &grid).unwrap().oracle_regime;
    let oracle_above = oracle_spne(&reference, 5.334, &grid).unwrap().oracle_regime;
    let transition = below == Regime::Deterred
        && above == Regime::Blockaded
        && oracle_below == Regime::Deterred
        && oracle_above == Regime::Blockaded;
    Verdict::new(
        regime_miss == 0 && x_miss == 0 && transition,
        format!(
            "{cases} cases, {regime_miss} regime and {x_miss} output mismatches; \
             R=5.333 {below}/{oracle_below}, R=5.334 {above}/{oracle_above}"
        ),
    )
}

fn conservation(markets: &[Market]) -> Verdict {
    let (mut deterred, mut accommodated, mut violations) = (0usize, 0usize, 0usize);
    for m in markets {
        let k = m.derived_constants();
        for r in linspace(0.0, 1.2 * k.pi_e_max, 200) {
            let out = m.solve(r).unwrap();
            match out.regime {
                Regime::Deterred => {
                    deterred += 1;
                    if !(out.x_star < k.x_monopoly && k.x_monopoly < k.x_static) {
                        violations += 1;
                    }
                }
                Regime::Accommodated => {
                    accommodated += 1;
                    if !(out.x_star == k.x_static && k.x_static > k.x_monopoly) {
                        violations += 1;
                    }
                }
                _ => {}
            }
        }
    }
    Verdict::new(
        violations == 0 && deterred > 0 && accommodated > 0,
        format!("{deterred} deterred, {accommodated} accommodated, {violations} violations"),
    )
}

fn monopoly_benchmark(markets: &[Market]) -> Verdict {
    let mut worst = 0.0f64;
    let mut misses = 0usize;
    for m in markets {
        let k = m.derived_constants();
        let n = 10_000;
        let step = k.x_cap / n as f64;
        let best = (0..=n)
            .map(|i| i as f64 * step)
            .map(|x| (x, m.two_period_monopoly_profit(x).unwrap()))
            .fold(
                (0.0, f64::NEG_INFINITY),
                |acc, (x, v)| if v > acc.1 { (x, v) } else { acc },
            );
        let off = (best.0 - k.x_monopoly).abs();
        worst = worst.max(off / step);
        if off > step {
            misses += 1;
        }
    }
    Verdict::new(
        misses == 0,
        format!("{misses} misses, worst offset {worst:.3} steps"),
    )
}

fn cli_determinism() -> Verdict {
    let bin = env!("CARGO_BIN_EXE_deterrence");
    let sweep = || {
        Command::new(bin)
            .args([
                "sweep",
                "--entry-cost-range",
                "0:7:0.05",
                "--sweep-phi",
                "0:1.9:0.1",
            ])
            .output()
            .expect("sweep runs")
    };
    let (a, b) = (sweep(), sweep());
    let identical = a.status.success() && a.stdout == b.stdout && !a.stdout.is_empty();

    let dir = tempfile::tempdir().unwrap();
    let fig = Command::new(bin)
        .args(["figure", "--out", dir.path().to_str().unwrap()])
        .output()
        .expect("figure runs");
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/figure");
    let mut stale = Vec::new();
    for name in ["curves.csv", "markers.csv"] {
        let got = std::fs::read(dir.path().join(name)).unwrap_or_default();
        let want = std::fs::read(golden.join(name)).unwrap_or_default();
        if got != want || want.is_empty() {
            stale.push(name);
        }
    }
    Verdict::new(
        identical && fig.status.success() && stale.is_empty(),
        format!(
            "sweep byte-identical: {identical}; golden mismatches: {}",
            if stale.is_empty() {
                "none".to_string()
            } else {
                stale.join(", ")
            }
        ),
    )
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Verdict + 'a>);

fn main() -> ExitCode {
    let many = draws(20_260_001, 500);
    let some = draws(20_260_002, 200);
    let criteria: [Criterion; 9] = [
        ("reference market landmarks", Box::new(figure_one)),
        ("deterrence never loses", Box::new(|| advantage_sweep(&many))),
        (
            "lower root closer to the monopoly output",
            Box::new(|| closer_root_wins(&many)),
        ),
        (
            "entrant profit smooth at the crossover",
            Box::new(|| smoothness(&many)),
        ),
        (
            "price oracle matches entrant profit",
            Box::new(|| subgame_oracle(&some)),
        ),
        (
            "equilibrium oracle matches regime map",
            Box::new(|| regime_map(&some)),
        ),
        ("deterrence conserves", Box::new(|| conservation(&many))),
        ("monopoly argmax on grid", Box::new(|| monopoly_benchmark(&many))),
        ("cli determinism and golden figure", Box::new(cli_determinism)),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let v = f();
        let tag = if v.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {} {name}: {}", i + 1, v.detail);
        for note in &v.notes {
            println!("       note: {note}");
        }
        if !v.pass {
            failed += 1;
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
