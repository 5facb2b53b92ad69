//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use contour_duo::verify::{crossed_deadlock_family, golden_traces, parameter_space};
use contour_duo::{
    check_golden, classify_empirical, deadlock_census, find_limit_cycle, is_admissible, step,
    sweep, DiscrepancyKind, EmpiricalMode, ExactRatio, InitialStatePolicy, ModePrediction,
    SweepReport, SystemParams, SystemState,
};
use contour_duo_cli::args::DiagramSource;
use contour_duo_cli::commands::diagram_cells;

fn full_sweep_12() -> &'static SweepReport {
    static REPORT: OnceLock<SweepReport> = OnceLock::new();
    REPORT.get_or_init(|| sweep(2, 12, InitialStatePolicy::AllAdmissible).unwrap())
}

fn lmin(p: &SystemParams) -> usize {
    p.l1().min(p.l2())
}

fn free_region(p: &SystemParams) -> bool {
    p.l1() + p.l2() <= p.n()
}

fn collapse_region(p: &SystemParams) -> bool {
    lmin(p) > p.n() - p.d()
}

fn within(elapsed: Duration, limit_secs: u64, what: &str) {
    assert!(
        elapsed < Duration::from_secs(limit_secs),
        "{what} took {elapsed:?}, limit {limit_secs} s"
    );
}

type Geometry = (usize, usize, usize, usize);

fn ac1_golden_traces() -> String {
    let start = Instant::now();
    let s = SystemState::new;
    let expected: [(Geometry, Vec<(usize, SystemState)>); 3] = [
        (
            (10, 4, 2, 3),
            vec![
                (0, s(2, 0)),
                (2, s(4, 2)),
                (4, s(6, 4)),
                (8, s(0, 8)),
                (10, s(2, 0)),
            ],
        ),
        (
            (10, 4, 2, 3),
            vec![
                (0, s(0, 3)),
                (1, s(1, 4)),
                (4, s(4, 7)),
                (7, s(7, 0)),
                (10, s(0, 3)),
            ],
        ),
        (
            (10, 3, 4, 5),
            vec![
                (0, s(4, 0)),
                (3, s(7, 3)),
                (6, s(0, 6)),
                (9, s(3, 9)),
                (10, s(4, 0)),
            ],
        ),
    ];
    let traces = golden_traces();
    for ((n, d, l1, l2), checkpoints) in &expected {
        let params = SystemParams::new(*n, *d, *l1, *l2).unwrap();
        let g = traces
            .iter()
            .find(|g| g.params == params && &g.checkpoints == checkpoints)
            .expect("required golden trace is shipped");
        assert!(check_golden(g), "{} does not reproduce", g.label);
    }
    for g in traces.iter().filter(|g| g.reproduces) {
        assert!(check_golden(g), "{} does not reproduce", g.label);
    }
    let elapsed = start.elapsed();
    within(elapsed, 1, "golden traces");
    format!("3 required traces exact, {elapsed:?}")
}

fn ac2_theorem1_exhaustive() -> String {
    let start = Instant::now();
    let report = full_sweep_12();
    let mut checked = 0;
    for r in report.rows.iter().filter(|r| free_region(&r.params)) {
        assert_eq!(
            r.empirical,
            EmpiricalMode::FreeMovement,
            "{} from {}",
            r.params,
            r.x0
        );
        assert_eq!(
            r.velocities,
            [ExactRatio::ONE; 2],
            "{} from {}",
            r.params,
            r.x0
        );
        assert_eq!(r.period, r.params.n(), "{} from {}", r.params, r.x0);
        checked += 1;
    }
    assert!(checked > 0);
    let elapsed = start.elapsed();
    within(elapsed, 60, "theorem-1 sweep");
    format!("{checked} instances free with v=(1,1), T=n; {elapsed:?}")
}

fn ac3_theorem3_exhaustive() -> String {
    let report = full_sweep_12();
    let mut checked = 0;
    for r in report.rows.iter().filter(|r| collapse_region(&r.params)) {
        assert_eq!(
            r.empirical,
            EmpiricalMode::Collapse,
            "{} from {}",
            r.params,
            r.x0
        );
        assert_eq!(r.velocities, [ExactRatio::ZERO; 2]);
        checked += 1;
    }
    assert!(checked > 0);
    format!("{checked} instances collapse with v=(0,0)")
}

fn ac4_lemma1_necessity() -> String {
    let report = full_sweep_12();
    let free: Vec<_> = report
        .rows
        .iter()
        .filter(|r| r.empirical == EmpiricalMode::FreeMovement)
        .collect();
    let violations = free.iter().filter(|r| !free_region(&r.params)).count();
    assert_eq!(violations, 0);
    format!("{} free cycles, 0 with l1+l2 > n", free.len())
}

fn ac5_deadlock_characterization() -> String {
    let mut nonempty = 0;
    for p in parameter_space(2, 12) {
        let census = deadlock_census(&p);
        // Independent route: fixed points of the step map.
        let brute: Vec<SystemState> = p
            .all_states()
            .filter(|s| is_admissible(&p, *s) && step(&p, *s).unwrap().next == *s)
            .collect();
        let closed = crossed_deadlock_family(&p);
        assert_eq!(census, brute, "{p}");
        assert_eq!(census, closed, "{p}");
        if collapse_region(&p) {
            assert!(
                !census.is_empty(),
                "collapse criterion without deadlock: {p}"
            );
        }
        nonempty += usize::from(!census.is_empty());
    }
    let p = SystemParams::new(10, 3, 4, 8).unwrap();
    assert!(deadlock_census(&p).contains(&SystemState::new(2, 9)));
    format!("census == closed form == fixed points; {nonempty} param sets with deadlocks")
}

fn ac6_theorem2_report() -> String {
    let report = full_sweep_12();
    let again = sweep(2, 12, InitialStatePolicy::AllAdmissible).unwrap();
    assert_eq!(&again, report, "sweep is not deterministic");

    let mut counts = [0usize; 4];
    let mut agree = 0;
    let mut rows = 0;
    for r in report
        .rows
        .iter()
        .filter(|r| !free_region(&r.params) && !collapse_region(&r.params))
    {
        rows += 1;
        assert_eq!(r.agree, r.discrepancy_kind.is_none());
        match r.discrepancy_kind {
            None => {
                let v = r.predicted.velocity();
                assert_eq!(r.period, r.params.l1() + r.params.l2());
                assert_eq!(r.velocities, [v, v]);
                agree += 1;
            }
            Some(k) => counts[DiscrepancyKind::ALL.iter().position(|x| *x == k).unwrap()] += 1,
        }
        if r.empirical != EmpiricalMode::Collapse {
            let [v1, v2] = r.velocities;
            assert_eq!(v1, v2, "{} from {}", r.params, r.x0);
            assert!(
                v1 > ExactRatio::ZERO && v1 < ExactRatio::ONE,
                "{} from {}",
                r.params,
                r.x0
            );
        } else {
            assert_eq!(r.discrepancy_kind, Some(DiscrepancyKind::CrossedDeadlock));
        }
    }
    let p = SystemParams::new(7, 2, 2, 6).unwrap();
    let sample = report
        .rows
        .iter()
        .find(|r| r.params == p && r.x0 == SystemState::new(2, 0))
        .unwrap();
    assert_eq!((sample.period, sample.moves), (9, [7, 7]));
    assert_eq!(sample.velocities, [ExactRatio::new(7, 9); 2]);
    assert_eq!(
        sample.discrepancy_kind,
        Some(DiscrepancyKind::PeriodMismatch)
    );
    format!(
        "{rows} instances: {agree} agree, crossed={} mode={} period={} velocity={}",
        counts[0], counts[1], counts[2], counts[3]
    )
}

fn ac7_velocity_symmetry() -> String {
    let report = sweep(2, 10, InitialStatePolicy::AllAdmissible).unwrap();
    let mut asym = 0;
    for r in &report.rows {
        if r.velocities[0] != r.velocities[1] {
            asym += 1;
            assert!(
                r.discrepancy_kind.is_some(),
                "unclassified asymmetry {} from {}",
                r.params,
                r.x0
            );
            assert!(
                !free_region(&r.params) && !collapse_region(&r.params),
                "asymmetry in free/collapse region {} from {}",
                r.params,
                r.x0
            );
        }
        if free_region(&r.params) || collapse_region(&r.params) {
            assert!(r.agree, "{} from {}", r.params, r.x0);
        }
    }
    assert_eq!(report.survey.asymmetric_unclassified, 0);
    format!("{} cycles, {asym} with v1 != v2", report.rows.len())
}

fn ac8_theory_diagram() -> String {
    let start = Instant::now();
    let cells = diagram_cells(20, 5, DiagramSource::Theory).unwrap();
    assert_eq!(cells.len(), 361);
    for c in &cells {
        let p = SystemParams::new(20, 5, c.l1, c.l2).unwrap();
        let (glyph, v) = if free_region(&p) {
            ('.', ExactRatio::ONE)
        } else if collapse_region(&p) {
            ('#', ExactRatio::ZERO)
        } else {
            ('+', ExactRatio::new(20, (c.l1 + c.l2) as u64))
        };
        assert_eq!(
            (c.mode, c.v_num, c.v_den),
            (glyph, v.numerator(), v.denominator())
        );
    }
    within(start.elapsed(), 10, "theory diagram");
    "361 cells assigned to the three regions".to_string()
}

fn ac8_simulation_diagram_regions() -> String {
    let start = Instant::now();
    let theory = diagram_cells(12, 3, DiagramSource::Theory).unwrap();
    let sim = diagram_cells(12, 3, DiagramSource::Simulation).unwrap();
    for (t, s) in theory.iter().zip(&sim) {
        let p = SystemParams::new(12, 3, t.l1, t.l2).unwrap();
        if free_region(&p) || collapse_region(&p) {
            assert_eq!(t, s);
        }
    }
    within(start.elapsed(), 10, "simulation diagram");
    "free and collapse regions identical".to_string()
}

fn ac8_simulation_diagram_interior() -> String {
    let sim = diagram_cells(12, 3, DiagramSource::Simulation).unwrap();
    let mut outside = Vec::new();
    for c in &sim {
        let p = SystemParams::new(12, 3, c.l1, c.l2).unwrap();
        if free_region(&p) || collapse_region(&p) {
            continue;
        }
        let v = ExactRatio::new(c.v_num, c.v_den);
        if !(v > ExactRatio::ZERO && v < ExactRatio::ONE) {
            outside.push((c.l1, c.l2, c.v_num, c.v_den));
        }
    }
    assert!(
        outside.is_empty(),
        "{} cluster-region cells with v outside (0,1), e.g. {:?}",
        outside.len(),
        &outside[..outside.len().min(6)]
    );
    "all cluster-region velocities in (0,1)".to_string()
}

fn ac9_core_properties() -> String {
    let mut states = 0;
    for p in parameter_space(2, 10) {
        for s in p.admissible_states() {
            let out = step(&p, s).unwrap();
            assert_eq!(step(&p, s).unwrap(), out);
            assert!(is_admissible(&p, out.next));
            for c in contour_duo::ClusterId::BOTH {
                if let Some(node) = contour_duo::at_node(&p, s, c) {
                    assert!(!contour_duo::occupies_node(&p, s, c, node));
                }
            }
            let cycle = find_limit_cycle(&p, s).unwrap();
            for a in cycle.moves {
                assert_eq!(a % p.n() as u64, 0);
            }
            let _ = classify_empirical(&cycle);
            states += 1;
        }
    }
    format!("{states} admissible states checked")
}

fn run_cli(args: &[&str], threads: &str) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_contour-duo"))
        .args(args)
        .env("CONTOUR_DUO_THREADS", threads)
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn ac10_serialization() -> String {
    let commands: [&[&str]; 8] = [
        &["sweep", "--n-min", "4", "--n-max", "7", "--format", "json"],
        &["sweep", "--n-min", "4", "--n-max", "7", "--format", "csv"],
        &[
            "diagram",
            "--n",
            "12",
            "--d",
            "3",
            "--source",
            "simulation",
            "--format",
            "json",
        ],
        &[
            "diagram",
            "--n",
            "12",
            "--d",
            "3",
            "--source",
            "simulation",
            "--format",
            "csv",
        ],
        &[
            "diagram",
            "--n",
            "12",
            "--d",
            "3",
            "--source",
            "simulation",
            "--format",
            "ascii",
        ],
        &["diagram", "--n", "20", "--d", "5", "--format", "ascii"],
        &[
            "cycle", "--n", "7", "--d", "2", "--l1", "2", "--l2", "6", "--x1", "2", "--x2", "0",
        ],
        &[
            "simulate", "--n", "4", "--d", "2", "--l1", "1", "--l2", "1", "--format", "csv",
        ],
    ];
    for args in commands {
        let (c1, single) = run_cli(args, "1");
        let (c2, again) = run_cli(args, "1");
        let (c3, many) = run_cli(args, "8");
        assert_eq!((c1, c2, c3), (0, 0, 0), "{args:?}");
        assert!(!single.is_empty());
        assert_eq!(single, again, "{args:?} differs across runs");
        assert_eq!(single, many, "{args:?} differs across worker counts");
    }
    format!(
        "{} commands byte-identical for 1 and 8 workers",
        commands.len()
    )
}

type Criterion = (&'static str, fn() -> String);

fn main() {
    let criteria: [Criterion; 12] = [
        ("AC1 golden traces", ac1_golden_traces),
        (
            "AC2 free-flow criterion exhaustive (n<=12)",
            ac2_theorem1_exhaustive,
        ),
        (
            "AC3 collapse criterion exhaustive (n<=12)",
            ac3_theorem3_exhaustive,
        ),
        ("AC4 free movement requires l1+l2<=n", ac4_lemma1_necessity),
        (
            "AC5 deadlock characterization",
            ac5_deadlock_characterization,
        ),
        ("AC6 cluster-motion region report", ac6_theorem2_report),
        ("AC7 velocity symmetry (n<=10)", ac7_velocity_symmetry),
        ("AC8a theory diagram n=20 d=5", ac8_theory_diagram),
        (
            "AC8b simulation diagram n=12 d=3, free/collapse regions",
            ac8_simulation_diagram_regions,
        ),
        (
            "AC8c simulation diagram n=12 d=3, interior velocities in (0,1)",
            ac8_simulation_diagram_interior,
        ),
        (
            "AC9 core properties exhaustive (n<=10)",
            ac9_core_properties,
        ),
        ("AC10 serialization determinism", ac10_serialization),
    ];
    // Sanity on the collapse-region predicate used throughout.
    assert_eq!(
        contour_duo::predict(&SystemParams::new(10, 3, 8, 9).unwrap()),
        ModePrediction::Collapse
    );

    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, check) in criteria {
        let started = Instant::now();
        match panic::catch_unwind(AssertUnwindSafe(check)) {
            Ok(detail) => println!("PASS  {name}: {detail} [{:?}]", started.elapsed()),
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("FAIL  {name}: {msg}");
            }
        }
    }
    println!("{} criteria, {failed} failed", criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
