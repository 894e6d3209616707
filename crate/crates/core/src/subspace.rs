//! Per-location linear dynamic model and its closed-form identification.
//!
//! The model is `v = C z + ω`, `z' = A z + B ε`: an orthonormal appearance
//! basis `C`, a state transition `A` and a basis `B` of the state innovation.
//! Identification follows the classic dynamic-texture recipe: a truncated SVD
//! of the data matrix gives `C` and the states, a least-squares fit over state
//! pairs gives `A`, and a truncated SVD of the one-step prediction error gives
//! `B`.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::float::sqrt;
use crate::numerics::{lstsq, pinv, svd, Matrix};

/// Which floor [`select_dim`] applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimKind {
    /// Appearance dimension, at least 1.
    Appearance,
    /// State-noise dimension, may be 0.
    Noise,
}

/// Number of leading (non-increasing) values strictly above `threshold`,
/// floored at 1 for [`DimKind::Appearance`].
pub fn select_dim(values: &[f64], threshold: f64, kind: DimKind) -> Result<usize> {
    if values.is_empty() {
        return Err(Error::invalid("select_dim on an empty spectrum"));
    }
    let n = values.iter().take_while(|&&v| v > threshold).count();
    Ok(match kind {
        DimKind::Appearance => n.max(1),
        DimKind::Noise => n,
    })
}

/// How a dimension threshold is read against a singular spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DimRule {
    /// Values are compared with the threshold itself.
    Absolute,
    /// Values are compared with `threshold · max(1, σ₁)`, so the threshold is
    /// a fraction of the leading value on any spectrum above unit scale.
    #[default]
    Relative,
}

impl DimRule {
    /// Dimension under this rule for a non-increasing spectrum.
    pub fn select(self, values: &[f64], threshold: f64, kind: DimKind) -> Result<usize> {
        let t = match self {
            DimRule::Absolute => threshold,
            DimRule::Relative => threshold * values.first().copied().unwrap_or(0.0).max(1.0),
        };
        select_dim(values, t, kind)
    }
}

/// Thresholds and buffer size used during identification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LearnParams {
    pub t_d: f64,
    pub t_deps: f64,
    pub rule: DimRule,
    /// Capacity of the state ring buffer.
    pub span: usize,
}

impl Default for LearnParams {
    fn default() -> Self {
        LearnParams {
            t_d: 0.5,
            t_deps: 0.5,
            rule: DimRule::default(),
            span: 60,
        }
    }
}

/// State of one brick location.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceModel {
    c: Matrix,
    lambda: Vec<f64>,
    a: Matrix,
    b: Matrix,
    b_pinv: Matrix,
    states: VecDeque<Vec<f64>>,
    span: usize,
    z_latest: Vec<f64>,
}

impl SubspaceModel {
    /// Assembles a model from explicit parts. `b` may have zero columns.
    pub fn from_parts(
        c: Matrix,
        lambda: Vec<f64>,
        a: Matrix,
        b: Matrix,
        z_latest: Vec<f64>,
        span: usize,
    ) -> Result<Self> {
        let d = c.cols();
        if d == 0 || c.rows() == 0 {
            return Err(Error::invalid("appearance basis must be non-empty"));
        }
        if lambda.len() != d || z_latest.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: if lambda.len() != d { lambda.len() } else { z_latest.len() },
            });
        }
        if a.rows() != d || a.cols() != d || b.rows() != d || b.cols() > d {
            return Err(Error::invalid("dynamics matrices do not match the basis"));
        }
        if span < 2 {
            return Err(Error::invalid("span must be at least 2"));
        }
        let b_pinv = if b.cols() == 0 {
            Matrix::zeros(0, d)
        } else {
            pinv(&b, None)?
        };
        let mut states = VecDeque::with_capacity(span);
        states.push_back(z_latest.clone());
        Ok(SubspaceModel {
            c,
            lambda,
            a,
            b,
            b_pinv,
            states,
            span,
            z_latest,
        })
    }

    /// Appearance basis, `m × d`.
    pub fn c(&self) -> &Matrix {
        &self.c
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    /// State transition, `d × d`.
    pub fn a(&self) -> &Matrix {
        &self.a
    }

    /// Innovation basis, `d × d_ε`.
    pub fn b(&self) -> &Matrix {
        &self.b
    }

    /// Cached pseudoinverse of `b`, `d_ε × d`.
    pub fn b_pinv(&self) -> &Matrix {
        &self.b_pinv
    }

    pub fn states(&self) -> &VecDeque<Vec<f64>> {
        &self.states
    }

    pub fn z_latest(&self) -> &[f64] {
        &self.z_latest
    }

    pub fn span(&self) -> usize {
        self.span
    }

    /// Descriptor length.
    pub fn m(&self) -> usize {
        self.c.rows()
    }

    pub fn d(&self) -> usize {
        self.c.cols()
    }

    pub fn d_eps(&self) -> usize {
        self.b.cols()
    }

    pub(crate) fn set_appearance(&mut self, c: Matrix, lambda: Vec<f64>) {
        debug_assert_eq!(c.cols(), self.d());
        self.c = c;
        self.lambda = lambda;
    }

    /// Re-expresses buffered states and the latest state through `r`
    /// (`d × d`), used when the basis rotates.
    pub(crate) fn transform_states(&mut self, r: &Matrix) -> Result<()> {
        for z in self.states.iter_mut() {
            *z = r.mul_vec(z)?;
        }
        self.z_latest = r.mul_vec(&self.z_latest)?;
        Ok(())
    }

    /// Appends a state, evicting the oldest beyond the span.
    pub(crate) fn push_state(&mut self, z: Vec<f64>) {
        if self.states.len() == self.span {
            self.states.pop_front();
        }
        self.states.push_back(z.clone());
        self.z_latest = z;
    }

    pub(crate) fn set_dynamics(&mut self, dynamics: Dynamics) {
        self.a = dynamics.a;
        self.b = dynamics.b;
        self.b_pinv = dynamics.b_pinv;
    }
}

/// Result of fitting `A` and `B` on a state sequence.
#[derive(Debug, Clone)]
pub(crate) struct Dynamics {
    pub a: Matrix,
    pub b: Matrix,
    pub b_pinv: Matrix,
}

/// Least-squares transition over consecutive pairs plus the truncated
/// innovation basis. Needs at least two states.
pub(crate) fn fit_dynamics<'a, I>(states: I, d: usize, t_deps: f64, rule: DimRule) -> Result<Dynamics>
where
    I: ExactSizeIterator<Item = &'a Vec<f64>> + Clone,
{
    let k = states.len();
    if k < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            actual: k,
        });
    }
    let pairs = k - 1;
    // Rows are states: prev · Aᵀ = next.
    let mut prev = Matrix::zeros(pairs, d);
    let mut next = Matrix::zeros(pairs, d);
    for (i, z) in states.enumerate() {
        if z.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: z.len(),
            });
        }
        for j in 0..d {
            if i < pairs {
                prev[(i, j)] = z[j];
            }
            if i > 0 {
                next[(i - 1, j)] = z[j];
            }
        }
    }
    let a = lstsq(&prev, &next)?.transpose();
    // E = next − prev·Aᵀ, laid out d × pairs.
    let err = next.sub(&prev.matmul(&a.transpose())?)?.transpose();
    let esvd = svd(&err)?;
    let d_eps = rule.select(&esvd.sigma, t_deps, DimKind::Noise)?.min(d);
    let scale = 1.0 / sqrt(pairs as f64);
    let b = Matrix::from_fn(d, d_eps, |r, c| esvd.u[(r, c)] * esvd.sigma[c] * scale);
    // B = U_ε Σ_ε / √(k−1) has orthonormal columns scaled by Σ_ε, so its
    // pseudoinverse is √(k−1) Σ_ε⁻¹ U_εᵀ.
    let b_pinv = Matrix::from_fn(d_eps, d, |r, c| esvd.u[(c, r)] / (esvd.sigma[r] * scale));
    Ok(Dynamics { a, b, b_pinv })
}

/// Identifies a model from `n >= 2` descriptors observed at one location.
pub fn learn_initial<V: AsRef<[f64]>>(bricks: &[V], params: LearnParams) -> Result<SubspaceModel> {
    let n = bricks.len();
    if n < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            actual: n,
        });
    }
    if params.span < 2 {
        return Err(Error::invalid("span must be at least 2"));
    }
    let m = bricks[0].as_ref().len();
    if m == 0 {
        return Err(Error::invalid("descriptors must be non-empty"));
    }
    let w = Matrix::from_columns(m, bricks)?;
    let s = svd(&w)?;
    let d = params.rule.select(&s.sigma, params.t_d, DimKind::Appearance)?;

    let c = s.u.leading_columns(d);
    // z_i = Σ_d · (row i of Q restricted to the first d columns).
    let states: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..d).map(|j| s.sigma[j] * s.q[(i, j)]).collect())
        .collect();
    let lambda: Vec<f64> = s.sigma[..d].iter().map(|v| v * v / n as f64).collect();
    let dynamics = fit_dynamics(states.iter(), d, params.t_deps, params.rule)?;

    let keep = params.span.min(n);
    let buffer: VecDeque<Vec<f64>> = states[n - keep..].iter().cloned().collect();
    Ok(SubspaceModel {
        c,
        lambda,
        a: dynamics.a,
        b: dynamics.b,
        b_pinv: dynamics.b_pinv,
        states: buffer,
        span: params.span,
        z_latest: states[n - 1].clone(),
    })
}
