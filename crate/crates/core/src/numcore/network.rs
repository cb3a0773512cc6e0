use rand::distr::{Distribution, Uniform};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Matrix;
use crate::error::{Error, Result};

/// Activation applied to the last layer. Hidden layers always use ReLU.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputActivation {
    Identity,
    Softmax,
}

/// Dense feed-forward network with ReLU hidden layers.
///
/// `weights[k]` maps layer `k` to layer `k + 1` and has shape
/// `(layer_sizes[k + 1], layer_sizes[k])`.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpNetwork {
    layer_sizes: Vec<usize>,
    weights: Vec<Matrix>,
    biases: Vec<Vec<f64>>,
    output_activation: OutputActivation,
}

/// Per-layer activations recorded by [`MlpNetwork::forward`].
#[derive(Debug, Clone)]
pub struct ForwardCache {
    layer_sizes: Vec<usize>,
    /// `activations[0]` is the input, `activations[k]` the output of layer `k`.
    activations: Vec<Matrix>,
    /// Pre-activation of layers `1..=L`.
    pre_activations: Vec<Matrix>,
}

impl ForwardCache {
    pub fn output(&self) -> &Matrix {
        self.activations.last().expect("cache has an input layer")
    }

    pub fn input(&self) -> &Matrix {
        &self.activations[0]
    }

    pub fn batch_size(&self) -> usize {
        self.activations[0].rows()
    }

    pub fn pre_activations(&self) -> &[Matrix] {
        &self.pre_activations
    }
}

/// Gradients with the same layout as the network they belong to.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientSet {
    pub weight_grads: Vec<Matrix>,
    pub bias_grads: Vec<Vec<f64>>,
}

impl GradientSet {
    pub fn zeros_like(net: &MlpNetwork) -> Self {
        Self {
            weight_grads: net
                .weights
                .iter()
                .map(|w| Matrix::zeros(w.rows(), w.cols()))
                .collect(),
            bias_grads: net.biases.iter().map(|b| vec![0.0; b.len()]).collect(),
        }
    }

    /// Flattened view in the same order as [`MlpNetwork::parameters`].
    pub fn flatten(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for (w, b) in self.weight_grads.iter().zip(&self.bias_grads) {
            out.extend_from_slice(w.data());
            out.extend_from_slice(b);
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.flatten().iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Euclidean norm over every weight and bias gradient.
    pub fn l2_norm(&self) -> f64 {
        let sq: f64 = self
            .weight_grads
            .iter()
            .map(|w| w.data().iter().map(|v| v * v).sum::<f64>())
            .chain(self.bias_grads.iter().map(|b| b.iter().map(|v| v * v).sum::<f64>()))
            .sum();
        sq.sqrt()
    }

    /// Rescales so the global norm is at most `max_norm`; returns the norm
    /// before clipping. A non-finite norm is left alone for `sgd_step` to reject.
    pub fn clip_norm(&mut self, max_norm: f64) -> f64 {
        let norm = self.l2_norm();
        if norm.is_finite() && norm > max_norm {
            self.scale(max_norm / norm);
        }
        norm
    }

    pub fn scale(&mut self, factor: f64) {
        for w in &mut self.weight_grads {
            w.data_mut().iter_mut().for_each(|v| *v *= factor);
        }
        for b in &mut self.bias_grads {
            b.iter_mut().for_each(|v| *v *= factor);
        }
    }
}

fn relu_in_place(m: &mut Matrix) {
    for v in m.data_mut() {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
}

fn softmax_rows(m: &mut Matrix) {
    for r in 0..m.rows() {
        let row = m.row_mut(r);
        let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut sum = 0.0;
        for v in row.iter_mut() {
            *v = (*v - max).exp();
            sum += *v;
        }
        row.iter_mut().for_each(|v| *v /= sum);
    }
}

impl MlpNetwork {
    /// Glorot-uniform weights, zero biases.
    pub fn new<R: Rng + ?Sized>(
        layer_sizes: &[usize],
        output_activation: OutputActivation,
        rng: &mut R,
    ) -> Result<Self> {
        let mut net = Self::zeroed(layer_sizes, output_activation)?;
        for w in &mut net.weights {
            let (fan_out, fan_in) = w.shape();
            let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
            let dist = Uniform::new_inclusive(-limit, limit).expect("finite positive limit");
            for v in w.data_mut() {
                *v = dist.sample(rng);
            }
        }
        Ok(net)
    }

    /// All weights and biases zero.
    pub fn zeroed(layer_sizes: &[usize], output_activation: OutputActivation) -> Result<Self> {
        if layer_sizes.len() < 2 {
            return Err(Error::InvalidLayout(format!(
                "need at least input and output sizes, got {layer_sizes:?}"
            )));
        }
        if layer_sizes.contains(&0) {
            return Err(Error::InvalidLayout(format!(
                "zero-width layer in {layer_sizes:?}"
            )));
        }
        let weights = layer_sizes
            .windows(2)
            .map(|w| Matrix::zeros(w[1], w[0]))
            .collect();
        let biases = layer_sizes[1..].iter().map(|&n| vec![0.0; n]).collect();
        Ok(Self {
            layer_sizes: layer_sizes.to_vec(),
            weights,
            biases,
            output_activation,
        })
    }

    /// Rebuilds a network from explicit parameters.
    pub fn from_parameters(
        layer_sizes: &[usize],
        output_activation: OutputActivation,
        weights: Vec<Matrix>,
        biases: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let template = Self::zeroed(layer_sizes, output_activation)?;
        let shapes_ok = weights.len() == template.weights.len()
            && biases.len() == template.biases.len()
            && weights
                .iter()
                .zip(&template.weights)
                .all(|(w, t)| w.shape() == t.shape())
            && biases
                .iter()
                .zip(&template.biases)
                .all(|(b, t)| b.len() == t.len());
        if !shapes_ok {
            return Err(Error::InvalidLayout(format!(
                "parameters do not match layer sizes {layer_sizes:?}"
            )));
        }
        Ok(Self {
            weights,
            biases,
            ..template
        })
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    pub fn input_size(&self) -> usize {
        self.layer_sizes[0]
    }

    pub fn output_size(&self) -> usize {
        *self.layer_sizes.last().unwrap()
    }

    pub fn output_activation(&self) -> OutputActivation {
        self.output_activation
    }

    pub fn weights(&self) -> &[Matrix] {
        &self.weights
    }

    pub fn biases(&self) -> &[Vec<f64>] {
        &self.biases
    }

    pub fn num_layers(&self) -> usize {
        self.weights.len()
    }

    pub fn parameter_count(&self) -> usize {
        self.weights
            .iter()
            .zip(&self.biases)
            .map(|(w, b)| w.data().len() + b.len())
            .sum()
    }

    /// Flattened parameters: layer by layer, weights (row-major) then biases.
    pub fn parameters(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.parameter_count());
        for (w, b) in self.weights.iter().zip(&self.biases) {
            out.extend_from_slice(w.data());
            out.extend_from_slice(b);
        }
        out
    }

    /// Mutable reference to the flattened parameter at `index`.
    pub fn parameter_mut(&mut self, mut index: usize) -> &mut f64 {
        for (w, b) in self.weights.iter_mut().zip(self.biases.iter_mut()) {
            let n = w.data().len();
            if index < n {
                return &mut w.data_mut()[index];
            }
            index -= n;
            if index < b.len() {
                return &mut b[index];
            }
            index -= b.len();
        }
        panic!("parameter index out of range");
    }

    fn same_shape(&self, other: &MlpNetwork) -> bool {
        self.layer_sizes == other.layer_sizes && self.output_activation == other.output_activation
    }

    pub fn forward(&self, input: &Matrix) -> Result<(Matrix, ForwardCache)> {
        let cache = self.forward_cache(input)?;
        Ok((cache.output().clone(), cache))
    }

    /// Forward pass that keeps every intermediate for [`Self::backward`].
    pub fn forward_cache(&self, input: &Matrix) -> Result<ForwardCache> {
        if input.cols() != self.input_size() {
            return Err(Error::Shape {
                context: "MlpNetwork::forward",
                expected: format!("{} input columns", self.input_size()),
                actual: format!("{} columns", input.cols()),
            });
        }
        let last = self.num_layers() - 1;
        let mut activations = Vec::with_capacity(self.num_layers() + 1);
        let mut pre_activations = Vec::with_capacity(self.num_layers());
        activations.push(input.clone());
        for (k, (w, b)) in self.weights.iter().zip(&self.biases).enumerate() {
            let mut z = activations[k].matmul_transposed(w);
            for r in 0..z.rows() {
                z.row_mut(r).iter_mut().zip(b).for_each(|(v, bias)| *v += bias);
            }
            let mut a = z.clone();
            if k < last {
                relu_in_place(&mut a);
            } else if self.output_activation == OutputActivation::Softmax {
                softmax_rows(&mut a);
            }
            pre_activations.push(z);
            activations.push(a);
        }
        Ok(ForwardCache {
            layer_sizes: self.layer_sizes.clone(),
            activations,
            pre_activations,
        })
    }

    /// Forward pass without keeping intermediates.
    pub fn predict(&self, input: &Matrix) -> Result<Matrix> {
        if input.cols() != self.input_size() {
            return Err(Error::Shape {
                context: "MlpNetwork::predict",
                expected: format!("{} input columns", self.input_size()),
                actual: format!("{} columns", input.cols()),
            });
        }
        let last = self.num_layers() - 1;
        let mut a = input.clone();
        for (k, (w, b)) in self.weights.iter().zip(&self.biases).enumerate() {
            let mut z = a.matmul_transposed(w);
            for r in 0..z.rows() {
                z.row_mut(r).iter_mut().zip(b).for_each(|(v, bias)| *v += bias);
            }
            if k < last {
                relu_in_place(&mut z);
            } else if self.output_activation == OutputActivation::Softmax {
                softmax_rows(&mut z);
            }
            a = z;
        }
        Ok(a)
    }

    fn check_cache(&self, cache: &ForwardCache, output_grad: &Matrix) -> Result<()> {
        if cache.layer_sizes != self.layer_sizes
            || cache.activations.len() != self.num_layers() + 1
        {
            return Err(Error::Shape {
                context: "MlpNetwork::backward (cache)",
                expected: format!("layers {:?}", self.layer_sizes),
                actual: format!("layers {:?}", cache.layer_sizes),
            });
        }
        if output_grad.shape() != cache.output().shape() {
            return Err(Error::Shape {
                context: "MlpNetwork::backward (output gradient)",
                expected: format!("{:?}", cache.output().shape()),
                actual: format!("{:?}", output_grad.shape()),
            });
        }
        Ok(())
    }

    /// Gradient with respect to the last pre-activation.
    fn output_delta(&self, cache: &ForwardCache, output_grad: &Matrix) -> Matrix {
        match self.output_activation {
            OutputActivation::Identity => output_grad.clone(),
            OutputActivation::Softmax => {
                // dz = p ⊙ (g − ⟨g, p⟩) per row.
                let p = cache.output();
                let mut dz = Matrix::zeros(p.rows(), p.cols());
                for r in 0..p.rows() {
                    let pr = p.row(r);
                    let gr = output_grad.row(r);
                    let dot: f64 = pr.iter().zip(gr).map(|(a, b)| a * b).sum();
                    for ((d, pv), gv) in dz.row_mut(r).iter_mut().zip(pr).zip(gr) {
                        *d = pv * (gv - dot);
                    }
                }
                dz
            }
        }
    }

    fn relu_mask(delta: &mut Matrix, pre: &Matrix) {
        for (d, z) in delta.data_mut().iter_mut().zip(pre.data()) {
            if *z <= 0.0 {
                *d = 0.0;
            }
        }
    }

    /// Exact gradients of the scalar whose partials with respect to the
    /// network output are `output_grad`. Returns parameter gradients and
    /// the gradient with respect to the input batch.
    pub fn backward(
        &self,
        cache: &ForwardCache,
        output_grad: &Matrix,
    ) -> Result<(GradientSet, Matrix)> {
        self.check_cache(cache, output_grad)?;
        let mut grads = GradientSet::zeros_like(self);
        let mut delta = self.output_delta(cache, output_grad);
        for k in (0..self.num_layers()).rev() {
            grads.weight_grads[k] = delta.transposed_matmul(&cache.activations[k]);
            let bias = &mut grads.bias_grads[k];
            for r in 0..delta.rows() {
                bias.iter_mut().zip(delta.row(r)).for_each(|(b, d)| *b += d);
            }
            let mut prev = delta.matmul(&self.weights[k]);
            if k > 0 {
                Self::relu_mask(&mut prev, &cache.pre_activations[k - 1]);
            }
            delta = prev;
        }
        Ok((grads, delta))
    }

    /// Like [`Self::backward`] but only propagates to the input.
    pub fn input_gradient(&self, cache: &ForwardCache, output_grad: &Matrix) -> Result<Matrix> {
        self.check_cache(cache, output_grad)?;
        let mut delta = self.output_delta(cache, output_grad);
        for k in (0..self.num_layers()).rev() {
            let mut prev = delta.matmul(&self.weights[k]);
            if k > 0 {
                Self::relu_mask(&mut prev, &cache.pre_activations[k - 1]);
            }
            delta = prev;
        }
        Ok(delta)
    }

    fn check_grads(&self, grads: &GradientSet) -> Result<()> {
        let shapes_ok = grads.weight_grads.len() == self.weights.len()
            && grads.bias_grads.len() == self.biases.len()
            && grads
                .weight_grads
                .iter()
                .zip(&self.weights)
                .all(|(g, w)| g.shape() == w.shape())
            && grads
                .bias_grads
                .iter()
                .zip(&self.biases)
                .all(|(g, b)| g.len() == b.len());
        if !shapes_ok {
            return Err(Error::Shape {
                context: "MlpNetwork::sgd_step",
                expected: format!("gradients for layers {:?}", self.layer_sizes),
                actual: "mismatched gradient set".into(),
            });
        }
        for (k, (w, b)) in grads.weight_grads.iter().zip(&grads.bias_grads).enumerate() {
            if !w.is_finite() {
                return Err(Error::NonFiniteGradient {
                    layer: k,
                    what: "weights",
                });
            }
            if !b.iter().all(|v| v.is_finite()) {
                return Err(Error::NonFiniteGradient {
                    layer: k,
                    what: "biases",
                });
            }
        }
        Ok(())
    }

    /// `p ← p − learning_rate · ∂p`. Nothing is modified if any gradient is
    /// non-finite.
    pub fn sgd_step(&mut self, grads: &GradientSet, learning_rate: f64) -> Result<()> {
        self.check_grads(grads)?;
        for (w, g) in self.weights.iter_mut().zip(&grads.weight_grads) {
            w.data_mut()
                .iter_mut()
                .zip(g.data())
                .for_each(|(p, d)| *p -= learning_rate * d);
        }
        for (b, g) in self.biases.iter_mut().zip(&grads.bias_grads) {
            b.iter_mut()
                .zip(g)
                .for_each(|(p, d)| *p -= learning_rate * d);
        }
        Ok(())
    }

    /// Polyak averaging: `self ← tau · live + (1 − tau) · self`.
    pub fn soft_update_from(&mut self, live: &MlpNetwork, tau: f64) -> Result<()> {
        if !self.same_shape(live) {
            return Err(Error::Shape {
                context: "soft_update",
                expected: format!("layers {:?}", self.layer_sizes),
                actual: format!("layers {:?}", live.layer_sizes),
            });
        }
        if !(tau > 0.0 && tau <= 1.0) {
            return Err(Error::Config(format!("tau must be in (0, 1], got {tau}")));
        }
        let blend = |t: &mut f64, l: f64| *t = tau * l + (1.0 - tau) * *t;
        for (t, l) in self.weights.iter_mut().zip(&live.weights) {
            t.data_mut()
                .iter_mut()
                .zip(l.data())
                .for_each(|(t, l)| blend(t, *l));
        }
        for (t, l) in self.biases.iter_mut().zip(&live.biases) {
            t.iter_mut().zip(l).for_each(|(t, l)| blend(t, *l));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeded_rng;

    #[test]
    fn paper_actor_shapes() {
        let net = MlpNetwork::new(&[2, 200, 200, 3], OutputActivation::Softmax, &mut seeded_rng(1))
            .unwrap();
        let shapes: Vec<_> = net.weights().iter().map(|w| w.shape()).collect();
        assert_eq!(shapes, vec![(200, 2), (200, 200), (3, 200)]);
        assert!(net.biases().iter().flatten().all(|&b| b == 0.0));
    }

    #[test]
    fn glorot_range() {
        let net = MlpNetwork::new(&[4, 6], OutputActivation::Identity, &mut seeded_rng(3)).unwrap();
        let limit = (6.0f64 / 10.0).sqrt();
        assert!(net.weights()[0].data().iter().all(|w| w.abs() <= limit));
    }

    #[test]
    fn rejects_bad_layouts() {
        let mut rng = seeded_rng(0);
        assert!(MlpNetwork::new(&[], OutputActivation::Identity, &mut rng).is_err());
        assert!(MlpNetwork::new(&[3], OutputActivation::Identity, &mut rng).is_err());
        assert!(MlpNetwork::new(&[3, 0, 1], OutputActivation::Identity, &mut rng).is_err());
    }

    #[test]
    fn zero_network_outputs_zero() {
        let net = MlpNetwork::zeroed(&[1, 1], OutputActivation::Identity).unwrap();
        let x = Matrix::from_rows(&[[3.5], [-2.0]]).unwrap();
        assert_eq!(net.predict(&x).unwrap().data(), &[0.0, 0.0]);
    }

    #[test]
    fn same_seed_same_parameters() {
        let a = MlpNetwork::new(&[2, 8, 3], OutputActivation::Softmax, &mut seeded_rng(9)).unwrap();
        let b = MlpNetwork::new(&[2, 8, 3], OutputActivation::Softmax, &mut seeded_rng(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn uniform_softmax_for_zero_logits() {
        let net = MlpNetwork::zeroed(&[2, 3], OutputActivation::Softmax).unwrap();
        let x = Matrix::from_rows(&[[0.4, -1.0]]).unwrap();
        let (y, _) = net.forward(&x).unwrap();
        for v in y.data() {
            assert!((v - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn single_affine_layer() {
        let w = Matrix::from_rows(&[[2.0]]).unwrap();
        let net =
            MlpNetwork::from_parameters(&[1, 1], OutputActivation::Identity, vec![w], vec![vec![1.0]])
                .unwrap();
        let (y, _) = net.forward(&Matrix::from_rows(&[[3.0]]).unwrap()).unwrap();
        assert_eq!(y.data(), &[7.0]);
    }

    #[test]
    fn dual_agent_critic_batch_shape() {
        // own observation (2) + two 3-way action vectors
        let critic =
            MlpNetwork::new(&[8, 700, 700, 1], OutputActivation::Identity, &mut seeded_rng(2))
                .unwrap();
        let x = Matrix::zeros(256, 8);
        let (y, cache) = critic.forward(&x).unwrap();
        assert_eq!(y.shape(), (256, 1));
        assert_eq!(cache.batch_size(), 256);
    }

    #[test]
    fn forward_rejects_wrong_width() {
        let net = MlpNetwork::zeroed(&[3, 2], OutputActivation::Identity).unwrap();
        assert!(net.forward(&Matrix::zeros(1, 2)).is_err());
    }

    #[test]
    fn zero_output_grad_gives_zero_gradients() {
        let net = MlpNetwork::new(&[3, 5, 2], OutputActivation::Softmax, &mut seeded_rng(4)).unwrap();
        let x = Matrix::from_rows(&[[0.1, 0.2, -0.3], [1.0, -1.0, 0.5]]).unwrap();
        let (y, cache) = net.forward(&x).unwrap();
        let (grads, dx) = net.backward(&cache, &Matrix::zeros(y.rows(), y.cols())).unwrap();
        assert_eq!(grads.max_abs(), 0.0);
        assert!(dx.data().iter().all(|&v| v == 0.0));
        assert_eq!(dx.shape(), x.shape());
    }

    #[test]
    fn softmax_input_gradient_is_jacobian_row() {
        let w = Matrix::from_rows(&[[1.0, 0.0], [0.0, 1.0]]).unwrap();
        let net = MlpNetwork::from_parameters(
            &[2, 2],
            OutputActivation::Softmax,
            vec![w],
            vec![vec![0.0, 0.0]],
        )
        .unwrap();
        let x = Matrix::from_rows(&[[0.7, -0.4]]).unwrap();
        let (p, cache) = net.forward(&x).unwrap();
        let (p1, p2) = (p.get(0, 0), p.get(0, 1));
        let (_, dx) = net
            .backward(&cache, &Matrix::from_rows(&[[1.0, 0.0]]).unwrap())
            .unwrap();
        assert!((dx.get(0, 0) - p1 * (1.0 - p1)).abs() < 1e-15);
        assert!((dx.get(0, 1) + p1 * p2).abs() < 1e-15);
    }

    #[test]
    fn backward_rejects_mismatched_cache() {
        let mut rng = seeded_rng(5);
        let a = MlpNetwork::new(&[2, 4, 3], OutputActivation::Softmax, &mut rng).unwrap();
        let b = MlpNetwork::new(&[2, 5, 3], OutputActivation::Softmax, &mut rng).unwrap();
        let x = Matrix::zeros(2, 2);
        let (_, cache) = a.forward(&x).unwrap();
        assert!(b.backward(&cache, &Matrix::zeros(2, 3)).is_err());
        assert!(a.backward(&cache, &Matrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn sgd_step_formula() {
        let w = Matrix::from_rows(&[[1.0]]).unwrap();
        let mut net =
            MlpNetwork::from_parameters(&[1, 1], OutputActivation::Identity, vec![w], vec![vec![0.0]])
                .unwrap();
        let mut g = GradientSet::zeros_like(&net);
        g.weight_grads[0].set(0, 0, 0.5);
        net.sgd_step(&g, 0.04).unwrap();
        assert!((net.weights()[0].get(0, 0) - 0.98).abs() < 1e-15);
    }

    #[test]
    fn sgd_step_no_ops() {
        let mut net = MlpNetwork::new(&[2, 4, 3], OutputActivation::Softmax, &mut seeded_rng(6)).unwrap();
        let before = net.clone();
        net.sgd_step(&GradientSet::zeros_like(&before), 0.06).unwrap();
        assert_eq!(net, before);

        let mut g = GradientSet::zeros_like(&net);
        g.weight_grads[1].data_mut().iter_mut().for_each(|v| *v = 3.0);
        net.sgd_step(&g, 0.0).unwrap();
        assert_eq!(net, before);
    }

    #[test]
    fn sgd_step_names_non_finite_layer() {
        let mut net = MlpNetwork::new(&[2, 4, 3], OutputActivation::Softmax, &mut seeded_rng(6)).unwrap();
        let before = net.clone();
        let mut g = GradientSet::zeros_like(&net);
        g.bias_grads[1][0] = f64::NAN;
        match net.sgd_step(&g, 0.1) {
            Err(Error::NonFiniteGradient { layer: 1, what: "biases" }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(net, before);
    }

    #[test]
    fn soft_update_cases() {
        let mut rng = seeded_rng(8);
        let live = MlpNetwork::new(&[2, 3, 1], OutputActivation::Identity, &mut rng).unwrap();
        let mut target = MlpNetwork::new(&[2, 3, 1], OutputActivation::Identity, &mut rng).unwrap();
        target.soft_update_from(&live, 1.0).unwrap();
        assert_eq!(target, live);

        let mut same = live.clone();
        same.soft_update_from(&live, 0.06).unwrap();
        assert_eq!(same, live);

        let one = MlpNetwork::from_parameters(
            &[1, 1],
            OutputActivation::Identity,
            vec![Matrix::from_rows(&[[1.0]]).unwrap()],
            vec![vec![1.0]],
        )
        .unwrap();
        let mut zero = MlpNetwork::zeroed(&[1, 1], OutputActivation::Identity).unwrap();
        zero.soft_update_from(&one, 0.06).unwrap();
        assert!((zero.weights()[0].get(0, 0) - 0.06).abs() < 1e-15);

        let other = MlpNetwork::zeroed(&[2, 4, 1], OutputActivation::Identity).unwrap();
        assert!(target.soft_update_from(&other, 0.5).is_err());
        assert!(target.soft_update_from(&live, 0.0).is_err());
    }
}
