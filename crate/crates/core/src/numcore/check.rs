//! Central-difference gradient checking.

use super::{GradientSet, Matrix, MlpNetwork};
use crate::error::Result;

/// A scalar loss of a network's output batch.
pub trait OutputLoss {
    fn value(&self, output: &Matrix) -> f64;
    /// Partial derivatives of [`Self::value`] with respect to each output entry.
    fn gradient(&self, output: &Matrix) -> Matrix;
}

/// Mean over all entries of `(output − target)²`.
#[derive(Debug, Clone)]
pub struct MseLoss {
    pub target: Matrix,
}

impl OutputLoss for MseLoss {
    fn value(&self, output: &Matrix) -> f64 {
        let n = output.data().len() as f64;
        output
            .data()
            .iter()
            .zip(self.target.data())
            .map(|(y, t)| (y - t).powi(2))
            .sum::<f64>()
            / n
    }

    fn gradient(&self, output: &Matrix) -> Matrix {
        let n = output.data().len() as f64;
        let data = output
            .data()
            .iter()
            .zip(self.target.data())
            .map(|(y, t)| 2.0 * (y - t) / n)
            .collect();
        Matrix::from_vec(output.rows(), output.cols(), data).expect("same shape")
    }
}

/// `Σ output ⊙ direction`, a random linear probe of the output.
#[derive(Debug, Clone)]
pub struct LinearLoss {
    pub direction: Matrix,
}

impl OutputLoss for LinearLoss {
    fn value(&self, output: &Matrix) -> f64 {
        output
            .data()
            .iter()
            .zip(self.direction.data())
            .map(|(a, b)| a * b)
            .sum()
    }

    fn gradient(&self, _output: &Matrix) -> Matrix {
        self.direction.clone()
    }
}

/// Constant loss; every gradient is exactly zero.
#[derive(Debug, Clone, Copy)]
pub struct ConstantLoss(pub f64);

impl OutputLoss for ConstantLoss {
    fn value(&self, _output: &Matrix) -> f64 {
        self.0
    }

    fn gradient(&self, output: &Matrix) -> Matrix {
        Matrix::zeros(output.rows(), output.cols())
    }
}

/// Replaces every bias with a uniform draw from `[-scale, scale]`.
///
/// Freshly initialized networks have zero biases, so in tiny ReLU networks a
/// fully inactive layer leaves the next pre-activation exactly on the kink,
/// where central differences are meaningless. Checks use this to move off it.
pub fn randomize_biases<R: rand::Rng + ?Sized>(net: &mut MlpNetwork, scale: f64, rng: &mut R) {
    let mut index = 0;
    let sizes = net.layer_sizes().to_vec();
    for w in sizes.windows(2) {
        index += w[0] * w[1];
        for _ in 0..w[1] {
            *net.parameter_mut(index) = rng.random_range(-scale..scale);
            index += 1;
        }
    }
}

/// `|a − n| / max(|a|, |n|, 1e-12)`.
pub fn relative_error(analytic: f64, numeric: f64) -> f64 {
    (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-12)
}

/// Compares `analytic` against central differences of `loss` over every
/// parameter of `net`; returns the largest relative error.
pub fn max_relative_error<F>(net: &MlpNetwork, analytic: &GradientSet, epsilon: f64, mut loss: F) -> f64
where
    F: FnMut(&MlpNetwork) -> f64,
{
    let analytic = analytic.flatten();
    let mut probe = net.clone();
    let mut worst: f64 = 0.0;
    for (i, &a) in analytic.iter().enumerate() {
        let original = *probe.parameter_mut(i);
        *probe.parameter_mut(i) = original + epsilon;
        let plus = loss(&probe);
        *probe.parameter_mut(i) = original - epsilon;
        let minus = loss(&probe);
        *probe.parameter_mut(i) = original;
        let numeric = (plus - minus) / (2.0 * epsilon);
        worst = worst.max(relative_error(a, numeric));
    }
    worst
}

/// Checks [`MlpNetwork::backward`] for `loss` evaluated on `input`.
pub fn gradient_check(
    net: &MlpNetwork,
    input: &Matrix,
    loss: &dyn OutputLoss,
    epsilon: f64,
) -> Result<f64> {
    gradient_check_with(net, input, loss, epsilon, |net, input, loss| {
        let (out, cache) = net.forward(input)?;
        let (grads, _) = net.backward(&cache, &loss.gradient(&out))?;
        Ok(grads)
    })
}

/// [`gradient_check`] with a caller-supplied analytic gradient routine.
pub fn gradient_check_with<G>(
    net: &MlpNetwork,
    input: &Matrix,
    loss: &dyn OutputLoss,
    epsilon: f64,
    analytic: G,
) -> Result<f64>
where
    G: FnOnce(&MlpNetwork, &Matrix, &dyn OutputLoss) -> Result<GradientSet>,
{
    assert!(
        epsilon > 0.0 && epsilon <= 1e-2,
        "epsilon must be in (0, 1e-2]"
    );
    let grads = analytic(net, input, loss)?;
    Ok(max_relative_error(net, &grads, epsilon, |probe| {
        loss.value(&probe.predict(input).expect("shape checked by analytic pass"))
    }))
}

#[cfg(test)]
mod tests {
    use rand::Rng;

    use super::*;
    use crate::numcore::OutputActivation;
    use crate::seeded_rng;

    fn random_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> Matrix {
        let data = (0..rows * cols).map(|_| rng.random_range(-1.0..1.0)).collect();
        Matrix::from_vec(rows, cols, data).unwrap()
    }

    #[test]
    fn small_softmax_net_matches_central_differences() {
        let mut rng = seeded_rng(11);
        let mut net = MlpNetwork::new(&[3, 5, 4, 2], OutputActivation::Softmax, &mut rng).unwrap();
        randomize_biases(&mut net, 0.5, &mut rng);
        let x = random_matrix(4, 3, &mut rng);
        let loss = LinearLoss {
            direction: random_matrix(4, 2, &mut rng),
        };
        assert!(gradient_check(&net, &x, &loss, 1e-5).unwrap() < 1e-4);
    }

    #[test]
    fn mse_loss_self_check() {
        let mut rng = seeded_rng(12);
        for activation in [OutputActivation::Identity, OutputActivation::Softmax] {
            let mut net = MlpNetwork::new(&[4, 6, 6, 3], activation, &mut rng).unwrap();
            randomize_biases(&mut net, 0.5, &mut rng);
            let x = random_matrix(5, 4, &mut rng);
            let loss = MseLoss {
                target: random_matrix(5, 3, &mut rng),
            };
            assert!(gradient_check(&net, &x, &loss, 1e-5).unwrap() < 1e-4);
        }
    }

    #[test]
    fn sign_flipped_backward_is_caught() {
        let mut rng = seeded_rng(13);
        let net = MlpNetwork::new(&[3, 5, 2], OutputActivation::Identity, &mut rng).unwrap();
        let x = random_matrix(3, 3, &mut rng);
        let loss = MseLoss {
            target: random_matrix(3, 2, &mut rng),
        };
        let err = gradient_check_with(&net, &x, &loss, 1e-5, |net, input, loss| {
            let (out, cache) = net.forward(input)?;
            let (mut grads, _) = net.backward(&cache, &loss.gradient(&out))?;
            grads.scale(-1.0);
            Ok(grads)
        })
        .unwrap();
        assert!((err - 2.0).abs() < 1e-3, "err = {err}");
    }

    #[test]
    fn constant_loss_reports_zero() {
        let mut rng = seeded_rng(14);
        let net = MlpNetwork::new(&[2, 3, 2], OutputActivation::Softmax, &mut rng).unwrap();
        let x = random_matrix(2, 2, &mut rng);
        assert_eq!(gradient_check(&net, &x, &ConstantLoss(4.2), 1e-5).unwrap(), 0.0);
    }
}
