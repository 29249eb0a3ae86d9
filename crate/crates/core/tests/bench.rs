mod common;

use std::path::PathBuf;

use critmp::bench::{
    log_time_grid, records_from_csv, records_to_csv, render_curves_svg, render_svg, run_benchmark, run_seed,
    solved_fraction_curve, summarize, write_records_csv, BenchmarkRecord, BenchmarkSpec, Overlays, TaskSource,
};
use critmp::bench::{generate_bench_tasks, CURVE_POINTS};
use critmp::planners::ClockMode;
use critmp::workspace::{Environment, Rect, RobotModel, DEFAULT_STEER_STEP};
use proptest::prelude::*;

fn small_world() -> (Environment, RobotModel) {
    let env = Environment::new(6.0, 6.0, 12, vec![Rect::new(2.5, 1.0, 3.5, 5.0)]).unwrap();
    (env, RobotModel::se2_rect(0.3, 0.2, (6.0, 6.0)))
}

fn spec(planners: &[&str], tasks: usize) -> BenchmarkSpec {
    BenchmarkSpec {
        tasks,
        budget_s: 1.0,
        build_budget_s: 0.2,
        planners: planners.iter().map(|s| s.to_string()).collect(),
        seed: 17,
        clock: ClockMode::Virtual,
        ..Default::default()
    }
}

#[test]
fn every_planner_sees_the_same_queries() {
    let (env, robot) = small_world();
    let s = spec(&["rrt", "birrt", "prm"], 10);
    let tasks = generate_bench_tasks(&s, &env, &robot).unwrap();
    let run = run_benchmark(&s, &env, &robot, &tasks, None).unwrap();
    assert_eq!(run.records.len(), 30);
    for t in 0..10 {
        let seeds: Vec<u64> = run.records.iter().filter(|r| r.task_id == t).map(|r| r.seed).collect();
        assert_eq!(seeds, vec![run_seed(&s, t, 0); 3]);
    }
    for (r, plan) in run.records.iter().zip(&run.plans) {
        assert_eq!(r.solved, plan.is_some());
        assert_eq!(r.build_time_s.is_some(), r.planner == "prm");
        if let Some(plan) = plan {
            let t = &tasks[r.task_id];
            assert!(common::plan_valid(&env, &robot, plan, &t.start, &t.goal, DEFAULT_STEER_STEP));
            assert_eq!(r.solve_time_s, Some(plan.solve_time));
        }
    }
    let again = run_benchmark(&s, &env, &robot, &tasks, None).unwrap();
    assert_eq!(records_to_csv(&run.records).unwrap(), records_to_csv(&again.records).unwrap());
}

#[test]
fn zero_budget_solves_nothing() {
    let (env, robot) = small_world();
    let s = BenchmarkSpec {
        budget_s: 0.0,
        build_budget_s: 0.0,
        ..spec(&["rrt", "birrt", "prm", "llp_uniform"], 4)
    };
    let tasks = generate_bench_tasks(&s, &env, &robot).unwrap();
    let run = run_benchmark(&s, &env, &robot, &tasks, None).unwrap();
    assert_eq!(run.records.len(), 16);
    assert!(run.records.iter().all(|r| !r.solved && r.solve_time_s.is_none()));
}

#[test]
fn bad_specs_fail_before_running() {
    let (env, robot) = small_world();
    let s = spec(&["rrt"], 2);
    let tasks = generate_bench_tasks(&s, &env, &robot).unwrap();
    assert!(run_benchmark(&spec(&["nope"], 2), &env, &robot, &tasks, None).is_err());
    assert!(run_benchmark(&spec(&["llp"], 2), &env, &robot, &tasks, None).is_err());
    assert!(run_benchmark(&spec(&[], 2), &env, &robot, &tasks, None).is_err());
}

#[test]
fn tasks_respect_source() {
    let env = common::passage_env();
    let robot = common::passage_robot();
    let s = BenchmarkSpec {
        tasks: 20,
        source: TaskSource {
            goal: Some(common::passage_goal()),
            start_box: Some(common::passage_start_box()),
            goal_box: None,
        },
        ..Default::default()
    };
    let tasks = generate_bench_tasks(&s, &env, &robot).unwrap();
    let b = common::passage_start_box();
    for t in &tasks {
        assert_eq!(t.goal, common::passage_goal());
        let (x, y) = t.start.position();
        assert!(x >= b.xmin && x <= b.xmax && y >= b.ymin && y <= b.ymax);
        assert!(common::config_free(&env, &robot, &t.start.0));
    }
    assert_eq!(tasks, generate_bench_tasks(&s, &env, &robot).unwrap());
}

fn record(planner: &str, id: usize, t: Option<f64>) -> BenchmarkRecord {
    BenchmarkRecord {
        planner: planner.into(),
        task_id: id,
        rep: 0,
        seed: id as u64,
        solved: t.is_some(),
        solve_time_s: t,
        nodes_expanded: t.map(|_| 7),
        build_time_s: None,
    }
}

#[test]
fn curves_match_hand_counts() {
    let all: Vec<_> = (0..4).map(|i| record("a", i, Some(0.1))).collect();
    assert_eq!(solved_fraction_curve(&all, "a", &[0.05, 0.2]).unwrap(), vec![(0.05, 0.0), (0.2, 1.0)]);
    let none: Vec<_> = (0..4).map(|i| record("a", i, None)).collect();
    assert_eq!(solved_fraction_curve(&none, "a", &[0.05, 0.2]).unwrap(), vec![(0.05, 0.0), (0.2, 0.0)]);
    let mixed = vec![
        record("a", 0, Some(0.3)),
        record("a", 1, None),
        record("a", 2, Some(0.01)),
        record("a", 3, Some(2.0)),
        record("a", 4, Some(0.3)),
        record("b", 0, Some(0.0)),
    ];
    let got = solved_fraction_curve(&mixed, "a", &[0.0, 0.01, 0.29, 0.3, 1.0, 5.0]).unwrap();
    let want = [0.0, 1.0, 1.0, 3.0, 3.0, 4.0].map(|k| k / 5.0);
    assert_eq!(got.iter().map(|p| p.1).collect::<Vec<_>>(), want);
    assert!(solved_fraction_curve(&mixed, "a", &[1.0, 0.5]).is_err());
    assert!(solved_fraction_curve(&mixed, "c", &[1.0]).is_err());
}

#[test]
fn time_grid_is_log_spaced() {
    let g = log_time_grid(0.01, 10.0, CURVE_POINTS);
    assert_eq!((g.len(), g[0], g[CURVE_POINTS - 1]), (50, 0.01, 10.0));
    let ratio = g[1] / g[0];
    assert!(g.windows(2).all(|w| (w[1] / w[0] - ratio).abs() < 1e-9));
}

#[test]
fn csv_round_trip_and_summary() {
    let (env, robot) = small_world();
    let s = spec(&["birrt", "prm"], 6);
    let tasks = generate_bench_tasks(&s, &env, &robot).unwrap();
    let run = run_benchmark(&s, &env, &robot, &tasks, None).unwrap();
    let text = records_to_csv(&run.records).unwrap();
    assert_eq!(records_from_csv(&text).unwrap(), run.records);
    let dir = tempfile::tempdir().unwrap();
    write_records_csv(dir.path().join("r.csv"), &run.records).unwrap();
    assert_eq!(std::fs::read_to_string(dir.path().join("r.csv")).unwrap(), text);

    let summary = summarize(&s, &run.records).unwrap();
    for p in &summary.planners {
        assert_eq!(p.runs, 6);
        for curve in [&p.curve, &p.curve_with_build] {
            assert_eq!(curve.len(), CURVE_POINTS);
            assert!(curve.windows(2).all(|w| w[0].1 <= w[1].1));
            assert!(curve.iter().all(|c| (0.0..=1.0).contains(&c.1)));
        }
        assert!(p.curve.iter().zip(&p.curve_with_build).all(|(a, b)| b.1 <= a.1));
    }
    assert_eq!(render_curves_svg(&summary), render_curves_svg(&summary));
}

proptest! {
    #[test]
    fn curves_monotone(times in proptest::collection::vec(proptest::option::of(0.0..3.0f64), 1..30)) {
        let recs: Vec<_> = times.iter().enumerate().map(|(i, &t)| record("x", i, t)).collect();
        let curve = solved_fraction_curve(&recs, "x", &log_time_grid(0.01, 3.0, 20)).unwrap();
        prop_assert!(curve.windows(2).all(|w| w[0].1 <= w[1].1));
        let solved = times.iter().flatten().count() as f64 / times.len() as f64;
        prop_assert_eq!(curve.last().unwrap().1, solved);
    }
}

fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/render_fixture.svg")
}

fn fixture_svg() -> String {
    let (env, _) = small_world();
    let n = env.n_d;
    let crit: Vec<f64> = (0..n * n).map(|k| if k % 5 == 0 { (k % 13) as f64 } else { 0.0 }).collect();
    let headings = (0..n * n).map(|k| (k % 3 == 0).then(|| (k % 4) as f64 * 0.8 - 1.2)).collect();
    render_svg(
        &env,
        &Overlays {
            criticality: Some(crit),
            headings: Some(headings),
            plan: Some(vec![(0.5, 0.5), (2.0, 0.5), (4.5, 5.5)]),
            start: Some((0.5, 0.5)),
            goal: Some((4.5, 5.5)),
        },
    )
}

/// Regenerate with `UPDATE_GOLDEN=1`.
#[test]
fn render_matches_golden_file() {
    let svg = fixture_svg();
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(golden_path().parent().unwrap()).unwrap();
        std::fs::write(golden_path(), &svg).unwrap();
    }
    assert_eq!(svg, std::fs::read_to_string(golden_path()).unwrap());
    assert_eq!(svg, fixture_svg());
}

#[test]
fn render_layers() {
    let (env, _) = small_world();
    let bare = render_svg(&env, &Overlays::default());
    assert_eq!(bare, render_svg(&env, &Overlays::default()));
    assert!(bare.starts_with("<svg") || bare.starts_with("<?xml"));
    let mut impulse = vec![0.0; 144];
    impulse[40] = 3.0;
    let one = render_svg(
        &env,
        &Overlays {
            criticality: Some(impulse),
            ..Default::default()
        },
    );
    let heat = |svg: &str| svg.lines().filter(|l| l.contains("fill=\"red\"")).count();
    assert_eq!((heat(&bare), heat(&one)), (0, 1), "{one}");
}
