use proptest::prelude::*;
use rand::SeedableRng;
use regmarl::gridnav::{Action, GridEnv, Heading};
use regmarl::maddpg::{regularization_penalty, soft_update};
use regmarl::numcore::{Matrix, MlpNetwork, OutputActivation};
use regmarl::replay::{ReplayBuffer, Transition};
use regmarl::{Observation, Rng};

fn action() -> impl Strategy<Value = Action> {
    (0usize..3).prop_map(|i| Action::from_index(i).unwrap())
}

fn heading() -> impl Strategy<Value = Heading> {
    (0usize..4).prop_map(|i| Heading::ALL[i])
}

fn transition(tag: f64) -> Transition {
    Transition {
        obs: vec![Observation([tag, 0.0])],
        action_vecs: vec![vec![0.2, 0.3, 0.5]],
        rewards: vec![-tag],
        next_obs: vec![Observation([tag, 1.0])],
        terminal: false,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn softmax_rows_are_distributions(
        seed in any::<u64>(),
        rows in 1usize..8,
        hidden in 1usize..12,
        inputs in prop::collection::vec(-10.0f64..10.0, 16),
    ) {
        let mut rng = Rng::seed_from_u64(seed);
        let net = MlpNetwork::new(&[2, hidden, 3], OutputActivation::Softmax, &mut rng).unwrap();
        let data: Vec<f64> = inputs.iter().cycle().take(rows * 2).copied().collect();
        let out = net.predict(&Matrix::from_vec(rows, 2, data).unwrap()).unwrap();
        for r in 0..rows {
            let row = out.row(r);
            prop_assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            prop_assert!(row.iter().all(|p| (0.0..=1.0).contains(p)));
        }
    }

    #[test]
    fn backward_input_grad_matches_input_shape(seed in any::<u64>(), rows in 1usize..6, width in 1usize..6) {
        let mut rng = Rng::seed_from_u64(seed);
        let net = MlpNetwork::new(&[width, 5, 2], OutputActivation::Identity, &mut rng).unwrap();
        let input = Matrix::from_vec(rows, width, (0..rows * width).map(|v| v as f64 * 0.1).collect()).unwrap();
        let (out, cache) = net.forward(&input).unwrap();
        let (_, input_grad) = net.backward(&cache, &Matrix::from_vec(out.rows(), 2, vec![1.0; out.rows() * 2]).unwrap()).unwrap();
        prop_assert_eq!(input_grad.shape(), input.shape());
    }

    #[test]
    fn headings_cycle(h in heading()) {
        let mut turned = h;
        for _ in 0..4 {
            turned = Action::Right.apply(turned);
        }
        prop_assert_eq!(turned, h);
        prop_assert_eq!(Action::Right.apply(Action::Left.apply(h)), h);
        prop_assert_eq!(Action::Straight.apply(h), h);
    }

    #[test]
    fn positions_stay_in_grid_and_done_is_monotone(
        seed in any::<u64>(),
        n_agents in 1usize..3,
        actions in prop::collection::vec(action(), 1..120),
    ) {
        let env = GridEnv::default();
        let mut rng = Rng::seed_from_u64(seed);
        let (mut state, _) = env.reset(n_agents, &mut rng).unwrap();
        let mut was_done = false;
        for chunk in actions.chunks(n_agents) {
            if chunk.len() < n_agents {
                break;
            }
            if was_done {
                prop_assert!(env.step(&state, chunk).is_err());
                break;
            }
            let before = state.clone();
            let out = env.step(&state, chunk).unwrap();
            for (i, a) in out.state.agents.iter().enumerate() {
                prop_assert!((0..6).contains(&a.position.0) && (0..6).contains(&a.position.1));
                let r = out.rewards[i];
                if a.position == a.destination {
                    prop_assert_eq!(r, 0.0);
                } else {
                    prop_assert!(r < 0.0);
                }
                if before.agents[i].reached {
                    prop_assert_eq!(a, &before.agents[i]);
                    prop_assert_eq!(r, 0.0);
                }
            }
            prop_assert!(out.state.step_count <= 50);
            was_done = out.done;
            state = out.state;
        }
    }

    #[test]
    fn step_is_pure(seed in any::<u64>(), a in action(), b in action()) {
        let env = GridEnv::default();
        let (state, _) = env.reset(2, &mut Rng::seed_from_u64(seed)).unwrap();
        let first = env.step(&state, &[a, b]).unwrap();
        let second = env.step(&state, &[a, b]).unwrap();
        prop_assert_eq!(first.state, second.state);
        prop_assert_eq!(first.rewards, second.rewards);
    }

    #[test]
    fn buffer_never_exceeds_capacity(capacity in 1usize..40, pushes in 0usize..120) {
        let mut buffer = ReplayBuffer::new(capacity, 1).unwrap();
        for k in 0..pushes {
            buffer.push(transition(k as f64)).unwrap();
            prop_assert!(buffer.len() <= capacity);
        }
        prop_assert_eq!(buffer.len(), pushes.min(capacity));
        // Oldest-first iteration holds exactly the most recent pushes.
        let kept: Vec<f64> = buffer.iter().map(|t| t.obs[0].0[0]).collect();
        let expected: Vec<f64> = (pushes.saturating_sub(capacity)..pushes).map(|k| k as f64).collect();
        prop_assert_eq!(kept, expected);
    }

    #[test]
    fn soft_update_shrinks_drift(seed in any::<u64>(), tau in 0.01f64..1.0) {
        let mut rng = Rng::seed_from_u64(seed);
        let live = MlpNetwork::new(&[3, 4, 2], OutputActivation::Identity, &mut rng).unwrap();
        let mut target = MlpNetwork::new(&[3, 4, 2], OutputActivation::Identity, &mut rng).unwrap();
        let before: Vec<f64> = live.parameters().iter().zip(target.parameters()).map(|(l, t)| (l - t).abs()).collect();
        soft_update(&live, &mut target, tau).unwrap();
        for ((l, t), d0) in live.parameters().iter().zip(target.parameters()).zip(before) {
            let d1 = (l - t).abs();
            prop_assert!((d1 - (1.0 - tau) * d0).abs() <= 1e-12 * (1.0 + d0));
        }
    }

    #[test]
    fn penalty_matches_straightforward_sum(
        outputs in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 3), 1..20),
        prior_raw in prop::collection::vec(0.01f64..1.0, 3),
        lambda in 0.0f64..10.0,
    ) {
        let total: f64 = prior_raw.iter().sum();
        let prior: Vec<f64> = prior_raw.iter().map(|p| p / total).collect();
        let rows = outputs.len() as f64;
        let mut expected = 0.0;
        for j in 0..3 {
            let mut mean = 0.0;
            for row in &outputs {
                mean += row[j];
            }
            mean /= rows;
            expected += (mean - prior[j]) * (mean - prior[j]);
        }
        expected *= lambda / 3.0;
        let flat: Vec<f64> = outputs.concat();
        let means = Matrix::from_vec(outputs.len(), 3, flat).unwrap().column_means();
        prop_assert!((regularization_penalty(&means, &prior, lambda) - expected).abs() < 1e-12);
    }
}
