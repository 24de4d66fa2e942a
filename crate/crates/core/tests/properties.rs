use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use loopswap::assignment::optimal_assignment;
use loopswap::capacity::{arc_slots, loop_capacity, placeable_loop_capacity, slot_angle};
use loopswap::conversion::convert_single_circle;
use loopswap::fixtures::{random_instance, random_swap_graph};
use loopswap::io::{read_trajectories_csv, write_trajectories_csv};
use loopswap::planner::{execute, plan_permutation, reverse_ops};
use loopswap::swap_graph::{validate, Occupancy};
use loopswap::trajectory::{realize_plan, verify_trajectories};
use loopswap::{Disk, Point2, Workspace};

fn point() -> impl Strategy<Value = Point2> {
    (-20.0..20.0f64, -20.0..20.0f64).prop_map(|(x, y)| Point2::new(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_graphs_are_valid_and_plannable(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_swap_graph(&mut rng, 40);
        prop_assert!(validate(&g).is_empty());
        let (start, goal) = random_instance(&mut rng, &g);
        let plan = plan_permutation(&g, &start, &goal).unwrap();
        prop_assert_eq!(execute(&g, &start, &plan.ops).unwrap(), goal.clone());
        // running the plan backwards undoes it
        prop_assert_eq!(execute(&g, &goal, &reverse_ops(&plan.ops)).unwrap(), start);
    }

    #[test]
    fn assignment_beats_any_permutation(
        starts in prop::collection::vec(point(), 1..12),
        extra in prop::collection::vec(point(), 0..4),
        rot in 0usize..16,
    ) {
        let mut slots: Vec<Point2> = starts.iter().map(|p| Point2::new(p.y, -p.x)).collect();
        slots.extend(extra);
        let asg = optimal_assignment(&starts, &slots).unwrap();
        let mut seen = vec![false; slots.len()];
        for &m in &asg.mapping {
            prop_assert!(!seen[m]);
            seen[m] = true;
        }
        let m = slots.len();
        let shifted: f64 = starts.iter().enumerate().map(|(i, p)| p.dist(slots[(i + rot) % m])).sum();
        prop_assert!(asg.total_cost <= shifted + 1e-9);
    }

    #[test]
    fn ring_counts_fit_on_the_centerline(i in 2usize..40) {
        prop_assert_eq!(loop_capacity(i), placeable_loop_capacity(i) + 1);
        let phi = slot_angle(i);
        // the placeable count leaves at least one slot spacing for the capsule
        prop_assert!((placeable_loop_capacity(i) - 1) as f64 * phi <= 2.0 * std::f64::consts::PI + 1e-9);
        prop_assert!(arc_slots(2.0 * std::f64::consts::PI, i) as f64 * phi >= 2.0 * std::f64::consts::PI);
    }

    #[test]
    fn single_circle_permutations_move_cleanly(radius in 3.0..9.0f64, seed in any::<u64>()) {
        let Some(res) = convert_single_circle(Disk::new(Point2::new(10.0, 10.0), radius), 1.0) else {
            return Ok(());
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (start, goal) = random_instance(&mut rng, &res.graph);
        let plan = plan_permutation(&res.graph, &start, &goal).unwrap();
        let ts = realize_plan(&res, &plan).unwrap();
        let w = Workspace::rectangle(20.0, 20.0);
        let rep = verify_trajectories(&ts, &w, 1.0, 0.05);
        prop_assert!(rep.is_clean(), "{:?}", rep.violations.first());
        let ends = ts.final_positions();
        for (v, a) in goal.slots.iter().enumerate() {
            if let Some(a) = a {
                prop_assert!(ends[a].dist(res.graph.vertices[v].position) < 1e-9);
            }
        }
        let mut buf = Vec::new();
        write_trajectories_csv(&mut buf, &ts).unwrap();
        prop_assert_eq!(read_trajectories_csv(buf.as_slice()).unwrap(), ts);
    }

    #[test]
    fn occupancy_json_round_trips(slots in prop::collection::vec(prop::option::of(0usize..1000), 0..30)) {
        let occ = Occupancy::new(slots);
        let text = serde_json::to_string(&occ).unwrap();
        prop_assert_eq!(serde_json::from_str::<Occupancy>(&text).unwrap(), occ);
    }
}
