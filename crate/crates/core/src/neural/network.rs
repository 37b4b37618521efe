use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    Relu,
    Tanh,
    Linear,
}

impl Activation {
    fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Relu => z.max(0.0),
            Activation::Tanh => z.tanh(),
            Activation::Linear => z,
        }
    }

    /// Derivative expressed through the activation's output `a`.
    fn derivative_from_output(self, a: f64) -> f64 {
        match self {
            Activation::Relu => {
                if a > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Tanh => 1.0 - a * a,
            Activation::Linear => 1.0,
        }
    }
}

/// Fully connected layer with weights stored input-major, `(inputs, outputs)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Dense {
    pub weights: Array2<f64>,
    pub bias: Array1<f64>,
    pub activation: Activation,
}

impl Dense {
    pub fn zeros(inputs: usize, outputs: usize, activation: Activation) -> Self {
        Self { weights: Array2::zeros((inputs, outputs)), bias: Array1::zeros(outputs), activation }
    }

    /// Uniform init: He bounds ahead of a relu, Glorot otherwise, times `scale`.
    pub fn random<R: Rng + ?Sized>(inputs: usize, outputs: usize, activation: Activation, scale: f64, rng: &mut R) -> Self {
        let bound = match activation {
            Activation::Relu => (6.0 / inputs as f64).sqrt(),
            _ => (6.0 / (inputs + outputs) as f64).sqrt(),
        } * scale;
        let weights = Array2::from_shape_fn((inputs, outputs), |_| rng.gen_range(-bound..=bound));
        Self { weights, bias: Array1::zeros(outputs), activation }
    }

    pub fn inputs(&self) -> usize {
        self.weights.nrows()
    }

    pub fn outputs(&self) -> usize {
        self.weights.ncols()
    }

    fn forward(&self, x: &ArrayView2<f64>) -> Array2<f64> {
        let mut z = x.dot(&self.weights);
        z += &self.bias;
        let act = self.activation;
        z.mapv_inplace(|v| act.apply(v));
        z
    }
}

/// A chain of dense layers.
#[derive(Clone, Debug, PartialEq)]
pub struct Mlp {
    layers: Vec<Dense>,
}

/// Activations kept from a forward pass: `activations[0]` is the input batch,
/// `activations[i + 1]` the output of layer `i`.
#[derive(Clone, Debug)]
pub struct ForwardCache {
    pub activations: Vec<Array2<f64>>,
}

impl ForwardCache {
    pub fn output(&self) -> &Array2<f64> {
        self.activations.last().expect("cache holds the input at least")
    }
}

impl Mlp {
    pub fn from_layers(layers: Vec<Dense>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::Config("network needs at least one layer".into()));
        }
        for pair in layers.windows(2) {
            if pair[0].outputs() != pair[1].inputs() {
                return Err(Error::Dimension { expected: pair[0].outputs(), got: pair[1].inputs() });
            }
        }
        for l in &layers {
            if l.bias.len() != l.outputs() {
                return Err(Error::Dimension { expected: l.outputs(), got: l.bias.len() });
            }
        }
        Ok(Self { layers })
    }

    /// Random network with widths `dims`, `hidden` activation between layers and
    /// `output` on the last. The last layer's init range is multiplied by
    /// `output_scale`.
    pub fn new<R: Rng + ?Sized>(
        dims: &[usize],
        hidden: Activation,
        output: Activation,
        output_scale: f64,
        rng: &mut R,
    ) -> Result<Self> {
        if dims.len() < 2 {
            return Err(Error::Config(format!("layer dims {dims:?} need an input and an output")));
        }
        let n = dims.len() - 1;
        let layers = (0..n)
            .map(|i| {
                let last = i == n - 1;
                let act = if last { output } else { hidden };
                Dense::random(dims[i], dims[i + 1], act, if last { output_scale } else { 1.0 }, rng)
            })
            .collect();
        Self::from_layers(layers)
    }

    pub fn layers(&self) -> &[Dense] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [Dense] {
        &mut self.layers
    }

    pub fn input_width(&self) -> usize {
        self.layers[0].inputs()
    }

    pub fn output_width(&self) -> usize {
        self.layers.last().expect("non-empty").outputs()
    }

    pub fn layer_dims(&self) -> Vec<usize> {
        let mut dims = vec![self.input_width()];
        dims.extend(self.layers.iter().map(Dense::outputs));
        dims
    }

    pub fn activations(&self) -> Vec<Activation> {
        self.layers.iter().map(|l| l.activation).collect()
    }

    fn check_width(&self, got: usize) -> Result<()> {
        if got != self.input_width() {
            return Err(Error::Dimension { expected: self.input_width(), got });
        }
        Ok(())
    }

    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_width(x.len())?;
        let batch = ArrayView2::from_shape((1, x.len()), x).expect("row view");
        Ok(self.forward_view(batch).into_raw_vec_and_offset().0)
    }

    pub fn forward_batch(&self, x: &Array2<f64>) -> Result<Array2<f64>> {
        self.check_width(x.ncols())?;
        Ok(self.forward_view(x.view()))
    }

    fn forward_view(&self, x: ArrayView2<f64>) -> Array2<f64> {
        let mut h = self.layers[0].forward(&x);
        for layer in &self.layers[1..] {
            h = layer.forward(&h.view());
        }
        h
    }

    pub fn forward_cached(&self, x: Array2<f64>) -> Result<ForwardCache> {
        self.check_width(x.ncols())?;
        let mut activations = Vec::with_capacity(self.layers.len() + 1);
        activations.push(x);
        for layer in &self.layers {
            let next = layer.forward(&activations.last().expect("non-empty").view());
            activations.push(next);
        }
        Ok(ForwardCache { activations })
    }

    /// Reverse pass. `d_output` is dLoss/dOutput for the cached batch; returns the
    /// flat parameter gradient (see [`Parameters`] ordering) and dLoss/dInput.
    pub fn backward(&self, cache: &ForwardCache, d_output: &Array2<f64>) -> (Vec<f64>, Array2<f64>) {
        let mut per_layer: Vec<(Array2<f64>, Array1<f64>)> = Vec::with_capacity(self.layers.len());
        let mut delta = d_output.clone();
        for (i, layer) in self.layers.iter().enumerate().rev() {
            let out = &cache.activations[i + 1];
            let act = layer.activation;
            if act != Activation::Linear {
                ndarray::Zip::from(&mut delta).and(out).for_each(|d, &a| *d *= act.derivative_from_output(a));
            }
            let input = &cache.activations[i];
            let dw = input.t().dot(&delta);
            let db = delta.sum_axis(Axis(0));
            let d_in = delta.dot(&layer.weights.t());
            per_layer.push((dw, db));
            delta = d_in;
        }
        per_layer.reverse();
        let mut flat = Vec::with_capacity(self.param_count());
        for (dw, db) in per_layer {
            flat.extend(dw.iter());
            flat.extend(db.iter());
        }
        (flat, delta)
    }
}

/// Flat view over a model's parameters: layer by layer, weights in row-major
/// `(input, output)` order followed by the bias.
pub trait Parameters {
    fn visit(&self, f: &mut dyn FnMut(&[f64]));
    fn visit_mut(&mut self, f: &mut dyn FnMut(&mut [f64]));

    fn param_count(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |s| n += s.len());
        n
    }

    fn flat_params(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.param_count());
        self.visit(&mut |s| out.extend_from_slice(s));
        out
    }

    fn set_flat_params(&mut self, params: &[f64]) -> Result<()> {
        if params.len() != self.param_count() {
            return Err(Error::Dimension { expected: self.param_count(), got: params.len() });
        }
        let mut offset = 0;
        self.visit_mut(&mut |s| {
            s.copy_from_slice(&params[offset..offset + s.len()]);
            offset += s.len();
        });
        Ok(())
    }

    fn all_finite(&self) -> bool {
        let mut ok = true;
        self.visit(&mut |s| ok &= s.iter().all(|v| v.is_finite()));
        ok
    }
}

impl Parameters for Mlp {
    fn visit(&self, f: &mut dyn FnMut(&[f64])) {
        for l in &self.layers {
            f(l.weights.as_slice().expect("standard layout"));
            f(l.bias.as_slice().expect("contiguous"));
        }
    }

    fn visit_mut(&mut self, f: &mut dyn FnMut(&mut [f64])) {
        for l in &mut self.layers {
            f(l.weights.as_slice_mut().expect("standard layout"));
            f(l.bias.as_slice_mut().expect("contiguous"));
        }
    }
}

/// Stacks equal-width rows into a batch matrix.
pub fn batch_matrix<T: AsRef<[f64]>>(rows: &[T]) -> Array2<f64> {
    let width = rows.first().map_or(0, |r| r.as_ref().len());
    let mut out = Array2::zeros((rows.len(), width));
    for (mut dst, src) in out.rows_mut().into_iter().zip(rows) {
        dst.assign(&ndarray::ArrayView1::from(src.as_ref()));
    }
    out
}
