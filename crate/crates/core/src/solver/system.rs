//! The critical equation as a real least-squares system.
//!
//! Each free complex value `z = a + ib` contributes two real unknowns. A
//! residual `R` with holomorphic derivative `D = ∂R/∂z` and antiholomorphic
//! derivative `E = ∂R/∂z̄` has `∂R/∂a = D + E` and `∂R/∂b = i(D − E)`, which
//! is all the Jacobian needs; the conjugate Fourier constraint is the only
//! source of `E ≠ 0`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::config::{FixedPoint, Normalization, SearchConfig, SymmetryConstraint};
use crate::group::{conj_fourier, reindex, roots_of_unity, GroupFunction};

#[derive(Debug, Clone, Copy, PartialEq)]
enum Slot {
    Fixed(Complex64),
    Param { index: usize, sign: f64 },
}

#[derive(Debug, Clone)]
pub(crate) struct System {
    d: usize,
    lambda: Complex64,
    slots: Vec<Slot>,
    /// Positions (and signs) carried by each complex parameter.
    groups: Vec<Vec<(usize, f64)>>,
    fixed_q: Option<usize>,
    unit_norm: bool,
    phase_pin: Option<usize>,
    roots: Vec<Complex64>,
}

impl System {
    pub(crate) fn new(cfg: &SearchConfig) -> Self {
        let d = cfg.modulus as usize;
        let h = (d - 1) / 2;
        let mut slots = vec![Slot::Fixed(Complex64::new(0.0, 0.0)); d];
        let mut next = 0;
        match cfg.symmetry {
            SymmetryConstraint::None => {
                for (k, s) in slots.iter_mut().enumerate() {
                    *s = Slot::Param { index: k, sign: 1.0 };
                }
            }
            SymmetryConstraint::Symmetric | SymmetryConstraint::Antisymmetric => {
                let odd = cfg.symmetry == SymmetryConstraint::Antisymmetric;
                let first = if odd { 1 } else { 0 };
                for k in first..=h {
                    slots[k] = Slot::Param { index: next, sign: 1.0 };
                    if k != 0 {
                        slots[d - k] = Slot::Param { index: next, sign: if odd { -1.0 } else { 1.0 } };
                    }
                    next += 1;
                }
            }
        }
        if cfg.normalization == Normalization::FirstValueOne {
            if let Slot::Param { index, sign } = slots[1] {
                for s in slots.iter_mut() {
                    if let Slot::Param { index: j, sign: t } = *s {
                        if j == index {
                            *s = Slot::Fixed(Complex64::new(t / sign, 0.0));
                        }
                    }
                }
            }
        }
        // renumber the surviving parameters densely
        let mut map = Vec::new();
        for s in slots.iter_mut() {
            if let Slot::Param { index, .. } = s {
                let pos = map.iter().position(|&m| m == *index).unwrap_or_else(|| {
                    map.push(*index);
                    map.len() - 1
                });
                *index = pos;
            }
        }
        let mut groups = vec![Vec::new(); map.len()];
        for (k, s) in slots.iter().enumerate() {
            if let Slot::Param { index, sign } = *s {
                groups[index].push((k, sign));
            }
        }
        let unit_norm = cfg.normalization == Normalization::UnitNorm;
        let fixed_q = match cfg.fixed_point {
            FixedPoint::None => None,
            FixedPoint::ConjFourier => Some(1),
            FixedPoint::ConjFourierWithQ(q) => Some(q as usize % d),
        };
        // the fixed-point relation already pins the phase up to sign
        let phase_pin = match slots[1] {
            Slot::Param { index, .. } if unit_norm && fixed_q.is_none() => Some(index),
            _ => None,
        };
        Self {
            d,
            lambda: cfg.lambda,
            slots,
            groups,
            fixed_q,
            unit_norm,
            phase_pin,
            roots: roots_of_unity(d),
        }
    }

    pub(crate) fn n_unknowns(&self) -> usize {
        2 * self.groups.len()
    }

    pub(crate) fn n_residuals(&self) -> usize {
        2 * self.d
            + if self.fixed_q.is_some() { 2 * self.d } else { 0 }
            + usize::from(self.unit_norm)
            + usize::from(self.phase_pin.is_some())
    }

    pub(crate) fn values(&self, x: &DVector<f64>) -> Vec<Complex64> {
        self.slots
            .iter()
            .map(|s| match *s {
                Slot::Fixed(c) => c,
                Slot::Param { index, sign } => Complex64::new(x[2 * index], x[2 * index + 1]) * sign,
            })
            .collect()
    }

    pub(crate) fn function(&self, x: &DVector<f64>) -> GroupFunction {
        GroupFunction::new(self.values(x)).expect("odd modulus")
    }

    /// Parameters reproducing `f` on its constrained positions.
    pub(crate) fn params_of(&self, f: &GroupFunction) -> DVector<f64> {
        let mut x = DVector::zeros(self.n_unknowns());
        for (p, g) in self.groups.iter().enumerate() {
            let (pos, sign) = g[0];
            let v = f.values()[pos] * sign;
            x[2 * p] = v.re;
            x[2 * p + 1] = v.im;
        }
        x
    }

    fn convolution_at(&self, f: &[Complex64], t: usize) -> Complex64 {
        let d = self.d;
        (0..d).map(|l| f[l] * f[(t + d - l) % d]).sum()
    }

    pub(crate) fn residuals(&self, x: &DVector<f64>) -> DVector<f64> {
        let d = self.d;
        let f = self.values(x);
        let mut r = DVector::zeros(self.n_residuals());
        for k in 0..d {
            let v = self.convolution_at(&f, 2 * k % d) - self.lambda * f[k] * f[k];
            r[2 * k] = v.re;
            r[2 * k + 1] = v.im;
        }
        let mut row = 2 * d;
        if let Some(q) = self.fixed_q {
            let g = GroupFunction::new(f.clone()).expect("odd modulus");
            let cf = conj_fourier(&g);
            for k in 0..d {
                let v = cf.values()[k] - f[q * k % d];
                r[row] = v.re;
                r[row + 1] = v.im;
                row += 2;
            }
        }
        if self.unit_norm {
            r[row] = f.iter().map(|v| v.norm_sqr()).sum::<f64>() - 1.0;
            row += 1;
        }
        if self.phase_pin.is_some() {
            r[row] = f[1].im;
        }
        r
    }

    pub(crate) fn jacobian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let d = self.d;
        let f = self.values(x);
        let n = self.n_unknowns();
        let mut jac = DMatrix::zeros(self.n_residuals(), n);
        let i = Complex64::i();
        let mut put = |row: usize, p: usize, dh: Complex64, da: Complex64| {
            let ca = dh + da;
            let cb = i * (dh - da);
            jac[(row, 2 * p)] = ca.re;
            jac[(row + 1, 2 * p)] = ca.im;
            jac[(row, 2 * p + 1)] = cb.re;
            jac[(row + 1, 2 * p + 1)] = cb.im;
        };
        let zero = Complex64::new(0.0, 0.0);
        for k in 0..d {
            for (p, g) in self.groups.iter().enumerate() {
                let mut dh = zero;
                for &(j, s) in g {
                    dh += 2.0 * s * f[(2 * k + 2 * d - j) % d];
                    if j == k {
                        dh -= 2.0 * s * self.lambda * f[k];
                    }
                }
                put(2 * k, p, dh, zero);
            }
        }
        let mut row = 2 * d;
        if let Some(q) = self.fixed_q {
            let scale = 1.0 / (d as f64).sqrt();
            for k in 0..d {
                for (p, g) in self.groups.iter().enumerate() {
                    let mut dh = zero;
                    let mut da = zero;
                    for &(j, s) in g {
                        da += self.roots[k * j % d] * (s * scale);
                        if j == q * k % d {
                            dh -= s;
                        }
                    }
                    put(row, p, dh, da);
                }
                row += 2;
            }
        }
        if self.unit_norm {
            for (p, g) in self.groups.iter().enumerate() {
                let m = g.len() as f64;
                jac[(row, 2 * p)] = 2.0 * m * x[2 * p];
                jac[(row, 2 * p + 1)] = 2.0 * m * x[2 * p + 1];
            }
            row += 1;
        }
        if let Some(p) = self.phase_pin {
            jac[(row, 2 * p + 1)] = self.groups[p].iter().find(|g| g.0 == 1).map_or(1.0, |g| g.1);
        }
        jac
    }

    /// Largest violation of the fixed-point relation, relative to `‖f‖∞`.
    pub(crate) fn fixed_point_violation(&self, f: &GroupFunction) -> f64 {
        match self.fixed_q {
            None => 0.0,
            Some(q) => {
                let fq = reindex(f, q as i64).expect("unit");
                conj_fourier(f).max_abs_diff(&fq).expect("same modulus") / f.max_abs().max(f64::MIN_POSITIVE)
            }
        }
    }
}
