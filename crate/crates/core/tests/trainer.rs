use rand::{Rng as _, SeedableRng};
use regmarl::maddpg::{
    actor_loss, actor_loss_and_grads, actor_update, critic_loss_and_grads, critic_target,
    critic_update, plain_actor_loss_and_grads, AgentRuntime, AgentSpec, Batch, NoiseSchedule,
    Trainer, TrainerConfig,
};
use regmarl::numcore::{MlpNetwork, OutputActivation};
use regmarl::{GridEnv, Observation, Rng, Transition};

fn specs(n: usize) -> Vec<AgentSpec> {
    let priors = [vec![0.0, 0.6, 0.4], vec![0.4, 0.6, 0.0]];
    (0..n)
        .map(|i| AgentSpec::new(priors[i % 2].clone(), vec![8], vec![8]).unwrap())
        .collect()
}

fn agents(n: usize, seed: u64) -> Vec<AgentRuntime> {
    let mut rng = Rng::seed_from_u64(seed);
    let specs = specs(n);
    let joint = 3 * n;
    specs
        .iter()
        .map(|s| AgentRuntime::new(s, joint, &mut rng).unwrap())
        .collect()
}

fn random_batch(n: usize, rows: usize, seed: u64) -> Batch {
    let mut rng = Rng::seed_from_u64(seed);
    let mut obs = || Observation([rng.random_range(-5..=5) as f64, rng.random_range(-5..=5) as f64]);
    let mut transitions = Vec::new();
    for k in 0..rows {
        let o: Vec<_> = (0..n).map(|_| obs()).collect();
        let o2: Vec<_> = (0..n).map(|_| obs()).collect();
        transitions.push(Transition {
            obs: o,
            action_vecs: (0..n).map(|i| vec![0.1 * (i + 1) as f64, 0.5, (k % 3) as f64 / 3.0]).collect(),
            rewards: (0..n).map(|i| -((k + i) as f64) / 4.0).collect(),
            next_obs: o2,
            terminal: k % 4 == 0,
        });
    }
    let refs: Vec<&Transition> = transitions.iter().collect();
    Batch::from_transitions(&refs).unwrap()
}

fn small_config() -> TrainerConfig {
    TrainerConfig {
        batch_size: 16,
        buffer_capacity: 64,
        iterations: 10,
        steps_per_iteration: 32,
        ..Default::default()
    }
}

#[test]
fn actor_update_touches_only_its_actor() {
    let mut live = agents(2, 1);
    let before = live.clone();
    let batch = random_batch(2, 12, 2);
    actor_update(&batch, &mut live, 0, Some(&[0.0, 0.6, 0.4]), 2.0, 0.04, None).unwrap();
    assert_ne!(live[0].actor, before[0].actor);
    assert_eq!(live[0].critic, before[0].critic);
    assert_eq!(live[0].target_actor, before[0].target_actor);
    assert_eq!(live[0].target_critic, before[0].target_critic);
    assert_eq!(live[1], before[1]);
}

#[test]
fn critic_update_touches_only_its_critic() {
    let mut live = agents(2, 3);
    let before = live.clone();
    let batch = random_batch(2, 12, 4);
    critic_update(&batch, &mut live, 1, 0.95, 0.06, true, None).unwrap();
    assert_ne!(live[1].critic, before[1].critic);
    assert_eq!(live[1].actor, before[1].actor);
    assert_eq!(live[1].target_critic, before[1].target_critic);
    assert_eq!(live[0], before[0]);
}

#[test]
fn zero_lambda_is_plain_maddpg() {
    let live = agents(2, 5);
    let batch = random_batch(2, 10, 6);
    for i in 0..2 {
        let (loss, grads) = actor_loss_and_grads(&batch, &live, i, &[0.2, 0.3, 0.5], 0.0).unwrap();
        let (plain_loss, plain_grads) = plain_actor_loss_and_grads(&batch, &live, i).unwrap();
        assert_eq!(loss, plain_loss);
        assert_eq!(grads, plain_grads);
    }
}

#[test]
fn zero_lambda_trainer_matches_unregularized_trainer() {
    let env = GridEnv::default();
    let base = TrainerConfig {
        lambda: 0.0,
        ..small_config()
    };
    let mut a = Trainer::new(env, specs(2), base.clone()).unwrap();
    let mut b = Trainer::new(
        env,
        specs(2),
        TrainerConfig {
            regularized: false,
            ..base
        },
    )
    .unwrap();
    for it in 0..4 {
        assert_eq!(a.train_iteration(it).unwrap(), b.train_iteration(it).unwrap());
    }
    assert_eq!(a.agents(), b.agents());
}

#[test]
fn no_op_configuration_leaves_parameters_bit_identical() {
    let config = TrainerConfig {
        lambda: 0.0,
        actor_lr: 0.0,
        critic_lr: 0.0,
        noise: NoiseSchedule::constant(0.0),
        // τ only mixes identical live and target copies here.
        tau: 0.5,
        ..small_config()
    };
    let mut trainer = Trainer::new(GridEnv::default(), specs(2), config).unwrap();
    let before = trainer.agents().to_vec();
    for it in 0..3 {
        let metrics = trainer.train_iteration(it).unwrap();
        if it > 0 {
            assert_eq!(metrics.updates, 2);
        }
    }
    assert_eq!(trainer.agents(), before.as_slice());
}

#[test]
fn huge_lambda_pulls_batch_mean_to_prior() {
    let mut live = agents(1, 7);
    let batch = random_batch(1, 32, 8);
    let prior = [0.0, 0.6, 0.4];
    for _ in 0..3000 {
        actor_update(&batch, &mut live, 0, Some(&prior), 1e6, 0.04, Some(0.5)).unwrap();
    }
    let mean = live[0].actor.predict(&batch.obs[0]).unwrap().column_means();
    for (m, p) in mean.iter().zip(prior) {
        assert!((m - p).abs() < 0.05, "mean {mean:?}");
    }
}

#[test]
fn zero_critic_and_zero_lambda_leave_actor_unchanged() {
    let mut live = agents(2, 9);
    for agent in &mut live {
        let sizes = agent.critic.layer_sizes().to_vec();
        agent.critic = MlpNetwork::zeroed(&sizes, OutputActivation::Identity).unwrap();
    }
    let before = live.clone();
    let batch = random_batch(2, 8, 10);
    let loss = actor_update(&batch, &mut live, 1, Some(&[0.4, 0.6, 0.0]), 0.0, 0.04, None).unwrap();
    assert_eq!(loss, 0.0);
    assert_eq!(live, before);
}

#[test]
fn loss_value_matches_loss_with_gradients() {
    let live = agents(2, 11);
    let batch = random_batch(2, 9, 12);
    let prior = [0.1, 0.6, 0.3];
    let value = actor_loss(&batch, &live, 0, &prior, 2.0).unwrap();
    let (with_grads, _) = actor_loss_and_grads(&batch, &live, 0, &prior, 2.0).unwrap();
    assert!((value - with_grads).abs() < 1e-12);
}

fn constant_critic(width: usize, value: f64) -> MlpNetwork {
    let mut net = MlpNetwork::zeroed(&[width, 4, 1], OutputActivation::Identity).unwrap();
    let last = net.parameter_count() - 1;
    *net.parameter_mut(last) = value;
    net
}

#[test]
fn critic_target_examples() {
    let mut live = agents(1, 13);
    live[0].target_critic = constant_critic(5, -10.0);
    let single = |reward: f64, terminal: bool| {
        let t = Transition {
            obs: vec![Observation([1.0, 2.0])],
            action_vecs: vec![vec![0.2, 0.5, 0.3]],
            rewards: vec![reward],
            next_obs: vec![Observation([1.0, 1.0])],
            terminal,
        };
        Batch::from_transitions(&[&t]).unwrap()
    };
    let y = critic_target(&single(-2.0, false), &live, 0, 0.95, true).unwrap();
    assert!((y[0] + 11.5).abs() < 1e-12);
    assert_eq!(critic_target(&single(0.0, true), &live, 0, 0.95, true).unwrap(), vec![0.0]);
    // Unmasked bootstrapping keeps Q' at terminal steps.
    let y = critic_target(&single(0.0, true), &live, 0, 0.95, false).unwrap();
    assert!((y[0] + 9.5).abs() < 1e-12);
    assert_eq!(critic_target(&single(-2.0, false), &live, 0, 0.0, true).unwrap(), vec![-2.0]);
}

#[test]
fn critic_loss_examples() {
    let batch = {
        let t = Transition {
            obs: vec![Observation([0.0, 4.0])],
            action_vecs: vec![vec![0.0, 1.0, 0.0]],
            rewards: vec![0.0],
            next_obs: vec![Observation([0.0, 3.0])],
            terminal: false,
        };
        Batch::from_transitions(&[&t]).unwrap()
    };
    let critic = constant_critic(5, 1.0);
    let (loss, _) = critic_loss_and_grads(&batch, &critic, 0, &[3.0]).unwrap();
    assert_eq!(loss, 4.0);
    let (loss, grads) = critic_loss_and_grads(&batch, &critic, 0, &[1.0]).unwrap();
    assert_eq!(loss, 0.0);
    assert_eq!(grads.max_abs(), 0.0);
}

#[test]
fn single_agent_critic_sees_own_observation_and_action() {
    let live = agents(1, 14);
    assert_eq!(live[0].critic.layer_sizes(), &[5, 8, 1]);
    let two = agents(2, 14);
    assert_eq!(two[0].critic.layer_sizes(), &[8, 8, 1]);
}

#[test]
fn iteration_collects_steps_and_runs_epochs() {
    let config = TrainerConfig {
        batch_size: 256,
        buffer_capacity: 2048,
        steps_per_iteration: 256,
        epochs_per_iteration: 2,
        ..Default::default()
    };
    let spec = AgentSpec::new(vec![0.0, 0.6, 0.4], vec![16], vec![16]).unwrap();
    let mut trainer = Trainer::new(GridEnv::default(), vec![spec], config).unwrap();
    for it in 0..3 {
        let metrics = trainer.train_iteration(it).unwrap();
        assert_eq!(trainer.buffer().len(), 256 * (it + 1));
        assert_eq!(metrics.updates, 2);
        let counted: usize = metrics.agents[0].action_counts.iter().sum();
        assert!(counted <= 256);
        let freq = metrics.agents[0].action_frequencies();
        assert!((freq.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn losses_stay_finite_under_default_hyperparameters() {
    let config = TrainerConfig {
        iterations: 60,
        ..Default::default()
    };
    let spec = AgentSpec::new(vec![0.0, 0.6, 0.4], vec![32, 32], vec![32, 32]).unwrap();
    let mut trainer = Trainer::new(GridEnv::default(), vec![spec], config).unwrap();
    for it in 0..60 {
        let m = trainer.train_iteration(it).unwrap();
        for a in &m.agents {
            assert!(a.actor_loss.is_none_or(f64::is_finite));
            assert!(a.critic_loss.is_none_or(f64::is_finite));
        }
    }
}

#[test]
fn penalty_gradient_points_toward_prior() {
    // With a zero critic only the penalty moves the actor.
    let mut live = agents(1, 15);
    let sizes = live[0].critic.layer_sizes().to_vec();
    live[0].critic = MlpNetwork::zeroed(&sizes, OutputActivation::Identity).unwrap();
    let batch = random_batch(1, 16, 16);
    let prior = [0.0, 0.6, 0.4];
    let dist = |live: &[AgentRuntime]| {
        let mean = live[0].actor.predict(&batch.obs[0]).unwrap().column_means();
        mean.iter().zip(prior).map(|(m, p)| (m - p).powi(2)).sum::<f64>()
    };
    let before = dist(&live);
    actor_update(&batch, &mut live, 0, Some(&prior), 2.0, 0.04, None).unwrap();
    assert!(dist(&live) < before);
}
