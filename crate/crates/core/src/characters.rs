//! Dirichlet characters modulo odd `d`, their Gauss and Jacobi sums, and
//! the critical value `λ_χ = χ(4)·J(χ, χ)` attached to characters with
//! primitive square.
//!
//! A character is stored as a full value table together with the exact
//! phase of each unit as a residue modulo the exponent `L` of `(ℤ/dℤ)*`,
//! so that conductor and primitivity tests are exact.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::arith::{factorize, gcd, lcm, unit_group};
use crate::error::{contract, Error, Result};
use crate::group::{roots_of_unity, GroupFunction};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirichletCharacter {
    modulus: u64,
    /// Images of the unit-group generators, as exponents `e_i` meaning
    /// `g_i ↦ exp(2iπ·e_i/n_i)`.
    exponents: Vec<u64>,
    /// `phases[k] = Some(j)` means `χ(k) = exp(2iπ·j/L)`; `None` off the units.
    phases: Vec<Option<u64>>,
    phase_modulus: u64,
    order: u64,
    values: Vec<Complex64>,
}

impl DirichletCharacter {
    fn from_phases(modulus: u64, exponents: Vec<u64>, phases: Vec<Option<u64>>, phase_modulus: u64) -> Self {
        let roots: Vec<Complex64> = (0..phase_modulus)
            .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / phase_modulus as f64))
            .collect();
        let values = phases
            .iter()
            .map(|p| p.map_or(Complex64::new(0.0, 0.0), |j| roots[j as usize]))
            .collect();
        let g = phases.iter().flatten().fold(0u64, |acc, &j| gcd(acc, j));
        let order = phase_modulus / gcd(phase_modulus, g);
        Self { modulus, exponents, phases, phase_modulus, order, values }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// `χ(k mod d)`.
    pub fn at(&self, k: i64) -> Complex64 {
        self.values[k.rem_euclid(self.modulus as i64) as usize]
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn as_function(&self) -> GroupFunction {
        GroupFunction::new(self.values.clone()).expect("odd modulus")
    }

    /// `χ²`.
    pub fn square(&self) -> Self {
        let l = self.phase_modulus;
        let ug_orders = unit_group(self.modulus).expect("valid modulus").orders;
        let exponents = self.exponents.iter().zip(&ug_orders).map(|(&e, &n)| 2 * e % n).collect();
        let phases = self.phases.iter().map(|p| p.map(|j| 2 * j % l)).collect();
        Self::from_phases(self.modulus, exponents, phases, l)
    }

    /// Complex-conjugate character.
    pub fn conj(&self) -> Self {
        let l = self.phase_modulus;
        let ug_orders = unit_group(self.modulus).expect("valid modulus").orders;
        let exponents = self.exponents.iter().zip(&ug_orders).map(|(&e, &n)| (n - e) % n).collect();
        let phases = self.phases.iter().map(|p| p.map(|j| (l - j) % l)).collect();
        Self::from_phases(self.modulus, exponents, phases, l)
    }

    /// Smallest divisor `d'` of `d` such that `χ(u) = 1` for every unit
    /// `u ≡ 1 mod d'`.
    pub fn conductor(&self) -> u64 {
        let d = self.modulus;
        factorize(d)
            .divisors()
            .into_iter()
            .find(|&dp| {
                (0..d).all(|u| u % dp != 1 % dp || self.phases[u as usize].is_none_or(|j| j == 0))
            })
            .unwrap_or(d)
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.modulus
    }
}

/// All `φ(d)` characters, lexicographic in the generator exponents.
pub fn enumerate_characters(d: u64) -> Result<Vec<DirichletCharacter>> {
    let ug = unit_group(d)?;
    let l = ug.orders.iter().fold(1, |acc, &n| lcm(acc, n));
    let tuples = ug.exponent_tuples();
    // unit ↦ its discrete-log tuple
    let logs: Vec<(u64, &Vec<u64>)> = tuples.iter().map(|k| (ug.element(k), k)).collect();
    let chars = tuples
        .iter()
        .map(|e| {
            let mut phases = vec![None; d as usize];
            for (u, k) in &logs {
                let j = e
                    .iter()
                    .zip(k.iter())
                    .zip(&ug.orders)
                    .map(|((&ei, &ki), &n)| ei * ki % n * (l / n))
                    .sum::<u64>()
                    % l;
                phases[*u as usize] = Some(j);
            }
            DirichletCharacter::from_phases(d, e.clone(), phases, l)
        })
        .collect();
    Ok(chars)
}

/// Number `N(d)` of primitive characters mod `d`.
pub fn count_primitive(d: u64) -> u64 {
    factorize(d)
        .factors
        .iter()
        .map(|&(p, r)| if r == 1 { p - 2 } else { (p - 1) * (p - 1) * p.pow(r - 2) })
        .product()
}

/// Number `N₀(d)` of characters mod odd `d` whose square is primitive.
pub fn count_primitive_square(d: u64) -> Result<u64> {
    if d % 2 == 0 {
        return Err(Error::BadModulus(d as i64));
    }
    Ok(factorize(d)
        .factors
        .iter()
        .map(|&(p, r)| if r == 1 { p.saturating_sub(3) } else { (p - 1) * (p - 1) * p.pow(r - 2) })
        .product())
}

/// `G(χ) = Σ_k exp(2iπk/d)·χ(k)`.
pub fn gauss_sum(chi: &DirichletCharacter) -> Complex64 {
    let roots = roots_of_unity(chi.modulus as usize);
    chi.values.iter().zip(&roots).map(|(c, w)| c * w).sum()
}

/// `J(χ₁, χ₂) = Σ_k χ₁(k)·χ₂(1−k)`.
pub fn jacobi_sum(chi1: &DirichletCharacter, chi2: &DirichletCharacter) -> Result<Complex64> {
    if chi1.modulus != chi2.modulus {
        return Err(Error::ModulusMismatch(chi1.modulus as usize, chi2.modulus as usize));
    }
    Ok((0..chi1.modulus as i64).map(|k| chi1.at(k) * chi2.at(1 - k)).sum())
}

/// `λ_χ = χ(4)·J(χ, χ)`; requires `χ²` primitive.
pub fn lambda_chi(chi: &DirichletCharacter) -> Result<Complex64> {
    let sq = chi.square();
    if !sq.is_primitive() {
        return contract(format!(
            "λ_χ needs χ² primitive; χ² has conductor {} < {}",
            sq.conductor(),
            chi.modulus
        ));
    }
    Ok(chi.at(4) * jacobi_sum(chi, chi)?)
}

/// Characters with primitive square together with their `λ_χ`.
pub fn critical_characters(d: u64) -> Result<Vec<(DirichletCharacter, Complex64)>> {
    enumerate_characters(d)?
        .into_iter()
        .filter(|c| c.square().is_primitive())
        .map(|c| {
            let l = lambda_chi(&c)?;
            Ok((c, l))
        })
        .collect()
}

/// Distinct values among `values`, first occurrence kept.
pub fn dedup_values(values: impl IntoIterator<Item = Complex64>, tol: f64) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::new();
    for v in values {
        if out.iter().all(|w| (w - v).norm() > tol) {
            out.push(v);
        }
    }
    out
}

/// Characters with primitive square whose `λ_χ` is within `tol` of `lambda`.
pub fn characters_with_lambda(d: u64, lambda: Complex64, tol: f64) -> Result<Vec<DirichletCharacter>> {
    Ok(critical_characters(d)?
        .into_iter()
        .filter(|(_, l)| (l - lambda).norm() <= tol)
        .map(|(c, _)| c)
        .collect())
}
