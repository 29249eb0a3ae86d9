mod common;

use critmp::criticality::{load_label, save_label, CriticalityMap, JointHistograms};
use critmp::dataset::{
    augment_rotations, build_label, collect_demonstrations, encode_input, encode_label, generate_tasks,
    heading_bin_shift, load_input, save_input, write_dataset, GoalStats, InputTensor, LabelTensor,
};
use critmp::planners::{ClockMode, TreeParams};
use critmp::tensor::Tensor3;
use critmp::workspace::{Configuration, Environment, Link, Rect, RobotModel, DEFAULT_STEER_STEP};

fn virtual_tree() -> TreeParams {
    TreeParams {
        clock: ClockMode::Virtual,
        ..Default::default()
    }
}

#[test]
fn channel_counts() {
    assert_eq!(common::channel_shapes(224), [(224, 224, 4), (224, 224, 11), (224, 224, 5), (224, 224, 21)]);
    assert_eq!(common::channel_shapes(16), [(16, 16, 4), (16, 16, 11), (16, 16, 5), (16, 16, 21)]);
}

#[test]
fn tasks_are_free_and_deterministic() {
    let env = common::passage_env();
    let robot = common::passage_robot();
    let a = generate_tasks(&env, &robot, 3, 2, 8).unwrap();
    assert_eq!((a.goals.len(), a.starts.len(), a.starts[2].len()), (3, 3, 2));
    for q in a.goals.iter().chain(a.starts.iter().flatten()) {
        assert!(common::config_free(&env, &robot, &q.0));
    }
    let b = generate_tasks(&env, &robot, 3, 2, 8).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert_ne!(a, generate_tasks(&env, &robot, 3, 2, 9).unwrap());

    let full = Environment::new(4.0, 4.0, 4, vec![Rect::new(0.0, 0.0, 4.0, 4.0)]).unwrap();
    assert!(generate_tasks(&full, &RobotModel::se2_rect(0.3, 0.2, (4.0, 4.0)), 1, 1, 0).is_err());
}

#[test]
fn demonstrations_on_empty_and_split_worlds() {
    let env = Environment::empty(6.0, 6.0, 12).unwrap();
    let robot = RobotModel::hinged(Link { length: 0.4, width: 0.1 }, (6.0, 6.0));
    let tasks = generate_tasks(&env, &robot, 2, 3, 1).unwrap();
    let demos = collect_demonstrations(&env, &robot, &tasks, 2.0, &virtual_tree()).unwrap();
    assert_eq!(demos.len(), 2);
    for (g, d) in demos.iter().enumerate() {
        assert_eq!((d.goal_index, d.attempted, d.failures, d.plans.len()), (g, 3, 0, 3));
        for (i, plan) in d.plans.iter().enumerate() {
            assert!(common::plan_valid(&env, &robot, plan, &tasks.starts[g][i], &tasks.goals[g], DEFAULT_STEER_STEP));
        }
    }

    // A full-height wall splits the world; cross-wall queries all fail.
    let wall = Environment::new(6.0, 6.0, 12, vec![Rect::new(2.9, 0.0, 3.1, 6.0)]).unwrap();
    let robot = RobotModel::se2_rect(0.3, 0.2, (6.0, 6.0));
    let tasks = critmp::dataset::TaskSet {
        goals: vec![Configuration(vec![5.0, 3.0, 0.0])],
        starts: vec![vec![Configuration(vec![1.0, 1.0, 0.0]), Configuration(vec![1.0, 5.0, 1.0])]],
        seed: 0,
    };
    let demos = collect_demonstrations(&wall, &robot, &tasks, 0.2, &virtual_tree()).unwrap();
    assert_eq!((demos[0].plans.len(), demos[0].failures), (0, 2));
}

#[test]
fn tensor_files_round_trip_bit_for_bit() {
    let dir = tempfile::tempdir().unwrap();
    let env = common::passage_env();
    let robot = common::passage_robot();
    let input = encode_input(&env, &robot, &common::passage_goal()).unwrap();
    save_input(dir.path().join("in.bin"), &input).unwrap();
    let back = load_input(dir.path().join("in.bin")).unwrap();
    assert_eq!(back, input);
    assert!(back.tensor.data().iter().zip(input.tensor.data()).all(|(a, b)| a.to_bits() == b.to_bits()));

    let (label, _) = common::random_label_and_logits(12, 2, 7, 3);
    save_label(dir.path().join("l.bin"), &label, None).unwrap();
    let (got, side) = load_label(dir.path().join("l.bin")).unwrap();
    assert!(side.is_none());
    assert!(got.tensor.data().iter().zip(label.tensor.data()).all(|(a, b)| a.to_bits() == b.to_bits()));
    assert!(load_input(dir.path().join("l.bin")).is_err());
}

#[test]
fn zero_map_uniform_hists_label() {
    let env = Environment::empty(4.0, 4.0, 4).unwrap();
    let robot = RobotModel::hinged(Link { length: 0.4, width: 0.1 }, (4.0, 4.0));
    let zero = CriticalityMap::from_scores(&env, vec![0.0; 16]).unwrap();
    let label = encode_label(&zero, &JointHistograms::uniform(4, 8, &robot)).unwrap();
    assert!(label.tensor.channel(0).iter().all(|&v| v == 0.0));
    assert!((1..17).all(|ch| label.tensor.channel(ch).iter().all(|&v| v == 1.0 / 8.0)));
}

fn impulse_pair(n: usize, p: usize, joints: usize) -> (InputTensor, LabelTensor) {
    let mut input = Tensor3::<f32>::zeros(n, 1 + 2 + joints);
    let mut label = Tensor3::<f32>::zeros(n, 1 + joints * p);
    input.set(1, 3, 0, 1.0);
    label.set(1, 3, 0, 1.0);
    for r in 0..n {
        for c in 0..n {
            input.set(r, c, 1, 0.2);
            input.set(r, c, 2, 0.7);
            input.set(r, c, 3, 0.1);
            for j in 0..joints {
                label.set(r, c, 1 + j * p + (r + c + j) % p, 1.0);
            }
        }
    }
    (InputTensor { tensor: input, dof: 2 + joints }, LabelTensor { tensor: label, p, joint_count: joints })
}

#[test]
fn rotations_move_impulse_and_roll_heading_bins() {
    let n = 6;
    let (input, label) = impulse_pair(n, 4, 2);
    let rots = augment_rotations(&input, &label).unwrap();
    assert_eq!(rots.len(), 4);
    assert_eq!(rots[0], (input.clone(), label.clone()));
    // A counter-clockwise quarter turn with y up sends (r, c) to (c, n - 1 - r);
    // three of them send it to (n - 1 - c, r).
    assert_eq!(rots[1].0.tensor.get(3, n - 1 - 1, 0), 1.0);
    assert_eq!(rots[1].1.tensor.get(3, n - 1 - 1, 0), 1.0);
    assert_eq!(rots[3].0.tensor.get(n - 1 - 3, 1, 0), 1.0);
    // Heading bin b of the original cell shows up as b + 1 with p = 4.
    let src = (1 + 3) % 4;
    assert_eq!(rots[1].1.tensor.get(3, n - 1 - 1, 1 + (src + 1) % 4), 1.0);
    assert_eq!(rots[3].1.tensor.get(n - 1 - 3, 1, 1 + (src + 3) % 4), 1.0);
    // The relative joint rotates spatially but keeps its bins.
    assert_eq!(rots[1].1.tensor.get(3, n - 1 - 1, 1 + 4 + (1 + 3 + 1) % 4), 1.0);
    assert_eq!(heading_bin_shift(4, 1), (1, true));
    assert_eq!(heading_bin_shift(10, 1).1, false);
    // Goal planes: x' = 1 - y, y' = x, heading + 1/4.
    let g = rots[1].0.tensor.cell(2, 2);
    assert!((g[1] - 0.3).abs() < 1e-6 && (g[2] - 0.2).abs() < 1e-6 && (g[3] - 0.35).abs() < 1e-6);
    for (inp, lab) in &rots {
        for r in 0..n {
            for c in 0..n {
                for j in 0..2 {
                    let s: f32 = (0..4).map(|b| lab.tensor.get(r, c, 1 + j * 4 + b)).sum();
                    assert_eq!(s, 1.0);
                }
            }
        }
        assert_eq!(inp.tensor.channel(0).iter().sum::<f32>(), 1.0);
    }
    // Two half turns are the identity on occupancy.
    let twice = augment_rotations(&rots[2].0, &rots[2].1).unwrap();
    assert_eq!(twice[2].0.tensor.channel(0), input.tensor.channel(0));
    assert_eq!(twice[2].1.tensor.channel(0), label.tensor.channel(0));
}

#[test]
fn dataset_tree_layout_and_determinism() {
    let env = Environment::new(6.0, 6.0, 12, vec![Rect::new(2.5, 0.0, 3.5, 2.0)]).unwrap();
    let robot = RobotModel::se2_rect(0.3, 0.2, (6.0, 6.0));
    let tasks = generate_tasks(&env, &robot, 2, 3, 4).unwrap();
    let demos = collect_demonstrations(&env, &robot, &tasks, 2.0, &virtual_tree()).unwrap();
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let stats_a = write_dataset(a.path(), &env, &robot, &tasks, &demos, 8, true).unwrap();
    let stats_b = write_dataset(b.path(), &env, &robot, &tasks, &demos, 8, true).unwrap();
    assert_eq!(stats_a, stats_b);
    let snap = common::dir_snapshot(a.path());
    assert_eq!(snap, common::dir_snapshot(b.path()));
    for f in ["env.json", "tasks.json"] {
        assert!(snap.contains_key(f), "{f}");
    }
    for g in 0..2 {
        for f in ["input.bin", "label.bin", "label.json", "plans.json", "stats.json"] {
            assert!(snap.contains_key(&format!("goal_{g:03}/{f}")), "goal {g} {f}");
        }
        for deg in [90, 180, 270] {
            assert!(snap.contains_key(&format!("goal_{g:03}/rot_{deg:03}/label.bin")));
        }
        let stats: GoalStats = serde_json::from_slice(&snap[&format!("goal_{g:03}/stats.json")]).unwrap();
        assert_eq!(stats, stats_a[g]);
        let (label, side) = load_label(a.path().join(format!("goal_{g:03}/label.bin"))).unwrap();
        let (want, _) = build_label(&env, &robot, &demos[g].plans, 8).unwrap();
        assert_eq!(label, want);
        assert_eq!(side.unwrap().plan_count as usize, demos[g].plans.len());
    }
}
