//! Small-integer arithmetic: factorization, the Jacobi symbol and the
//! structure of `(ℤ/dℤ)*` for odd `d`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::check_modulus;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut b = (base % m) as u128;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: i64, m: u64) -> Option<u64> {
    let m = m as i64;
    let (mut r0, mut r1) = (a.rem_euclid(m), m);
    let (mut s0, mut s1) = (1i64, 0i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(m) as u64)
}

/// Prime factorization `n = Π p^r`, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub n: u64,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn prime_powers(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, r)| p.pow(r))
    }

    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, r) in &self.factors {
            let base = divs.clone();
            let mut pk = 1;
            for _ in 0..r {
                pk *= p;
                divs.extend(base.iter().map(|x| x * pk));
            }
        }
        divs.sort_unstable();
        divs
    }
}

/// Trial division; intended for `n ≤ 10⁹`.
pub fn factorize(n: u64) -> Factorization {
    assert!(n >= 1, "factorize: n must be positive");
    let mut factors = Vec::new();
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            let mut r = 0;
            while m % p == 0 {
                m /= p;
                r += 1;
            }
            factors.push((p, r));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        factors.push((m, 1));
    }
    Factorization { n, factors }
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .factors
        .iter()
        .map(|&(p, r)| (p - 1) * p.pow(r - 1))
        .product()
}

/// Jacobi symbol `(n/d)` for odd positive `d`.
pub fn jacobi_symbol(n: i64, d: i64) -> Result<i8> {
    if d <= 0 || d % 2 == 0 {
        return Err(Error::Contract(format!(
            "Jacobi symbol needs an odd positive denominator, got {d}"
        )));
    }
    let mut a = n.rem_euclid(d) as u64;
    let mut m = d as u64;
    let mut acc = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            // (2/m) = -1 iff m ≡ ±3 mod 8
            if matches!(m % 8, 3 | 5) {
                acc = -acc;
            }
        }
        std::mem::swap(&mut a, &mut m);
        if a % 4 == 3 && m % 4 == 3 {
            acc = -acc;
        }
        a %= m;
    }
    Ok(if m == 1 { acc } else { 0 })
}

/// Multiplicative order of the unit `a` modulo `m`.
pub fn multiplicative_order(a: u64, m: u64) -> u64 {
    let phi = euler_phi(m);
    let mut order = phi;
    for &(p, _) in &factorize(phi).factors {
        while order % p == 0 && mod_pow(a, order / p, m) == 1 {
            order /= p;
        }
    }
    order
}

/// `(ℤ/dℤ)*` as a direct product of cyclic groups, one per prime power of
/// `d`. Each generator is the CRT lift of the smallest primitive root of its
/// prime power, taken to be `1` on the other components.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitGroupStructure {
    pub modulus: u64,
    pub generators: Vec<u64>,
    pub orders: Vec<u64>,
}

impl UnitGroupStructure {
    /// `Π g_i^{e_i} mod d`.
    pub fn element(&self, exponents: &[u64]) -> u64 {
        self.generators
            .iter()
            .zip(exponents)
            .fold(1u64, |acc, (&g, &e)| acc * mod_pow(g, e, self.modulus) % self.modulus)
    }

    /// All exponent tuples in lexicographic order.
    pub fn exponent_tuples(&self) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for &n in &self.orders {
            out = out
                .into_iter()
                .flat_map(|t| {
                    (0..n).map(move |e| {
                        let mut t = t.clone();
                        t.push(e);
                        t
                    })
                })
                .collect();
        }
        out
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }
}

/// Chinese remaindering: the residue mod `Π m_i` congruent to `r_i` mod `m_i`.
fn crt(residues: &[(u64, u64)]) -> u64 {
    let total: u64 = residues.iter().map(|&(_, m)| m).product();
    residues.iter().fold(0u64, |acc, &(r, m)| {
        let rest = total / m;
        let inv = mod_inverse(rest as i64, m).expect("pairwise coprime moduli");
        ((acc as u128 + r as u128 * rest as u128 % total as u128 * inv as u128) % total as u128) as u64
    })
}

pub fn unit_group(d: u64) -> Result<UnitGroupStructure> {
    check_modulus(d)?;
    let fac = factorize(d);
    let powers: Vec<u64> = fac.prime_powers().collect();
    let mut generators = Vec::new();
    let mut orders = Vec::new();
    for (i, &(p, r)) in fac.factors.iter().enumerate() {
        let pr = powers[i];
        let order = (p - 1) * p.pow(r - 1);
        let g = (2..pr)
            .find(|&g| gcd(g, pr) == 1 && multiplicative_order(g, pr) == order)
            .expect("odd prime powers are cyclic");
        let residues: Vec<(u64, u64)> = powers
            .iter()
            .enumerate()
            .map(|(j, &m)| (if j == i { g } else { 1 }, m))
            .collect();
        generators.push(crt(&residues));
        orders.push(order);
    }
    Ok(UnitGroupStructure { modulus: d, generators, orders })
}

/// Units of `ℤ/dℤ` in increasing order.
pub fn units(d: u64) -> Vec<u64> {
    (1..d).filter(|&k| gcd(k, d) == 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(15).factors, vec![(3, 1), (5, 1)]);
        assert_eq!(factorize(9).factors, vec![(3, 2)]);
        assert_eq!(factorize(17).factors, vec![(17, 1)]);
        assert_eq!(factorize(1).factors, vec![]);
        assert_eq!(factorize(999_999_937).factors, vec![(999_999_937, 1)]);
        assert_eq!(factorize(45).divisors(), vec![1, 3, 5, 9, 15, 45]);
    }

    #[test]
    fn jacobi_examples() {
        for d in (1..60).step_by(2) {
            assert_eq!(jacobi_symbol(1, d).unwrap(), 1);
        }
        assert_eq!(jacobi_symbol(2, 5).unwrap(), -1);
        assert_eq!(jacobi_symbol(2, 15).unwrap(), 1);
        assert_eq!(jacobi_symbol(5, 1).unwrap(), 1);
        assert_eq!(jacobi_symbol(3, 9).unwrap(), 0);
        assert_eq!(jacobi_symbol(-1, 7).unwrap(), -1);
        assert!(jacobi_symbol(1, 4).is_err());
        assert!(jacobi_symbol(1, -3).is_err());
    }

    #[test]
    fn jacobi_agrees_with_euler_criterion() {
        let primes: Vec<i64> = (3..100).filter(|&p| factorize(p as u64).factors.len() == 1
            && factorize(p as u64).factors[0].1 == 1).collect();
        for p in primes {
            for n in 0..p {
                let e = mod_pow(n as u64, (p as u64 - 1) / 2, p as u64);
                let want = if n == 0 { 0 } else if e == 1 { 1 } else { -1 };
                assert_eq!(jacobi_symbol(n, p).unwrap(), want, "({n}/{p})");
            }
        }
    }

    #[test]
    fn jacobi_multiplicative() {
        for d in (1..80i64).step_by(2) {
            for a in -10..30 {
                for b in 0..12 {
                    let lhs = jacobi_symbol(a * b, d).unwrap();
                    let rhs = jacobi_symbol(a, d).unwrap() * jacobi_symbol(b, d).unwrap();
                    assert_eq!(lhs, rhs);
                }
                if gcd(a.rem_euclid(d) as u64, d as u64) == 1 {
                    assert_eq!(jacobi_symbol(a * a, d).unwrap(), 1);
                }
            }
        }
        for d1 in (1..30i64).step_by(2) {
            for d2 in (1..30i64).step_by(2) {
                for a in 0..20 {
                    assert_eq!(
                        jacobi_symbol(a, d1 * d2).unwrap(),
                        jacobi_symbol(a, d1).unwrap() * jacobi_symbol(a, d2).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn unit_group_examples() {
        let g5 = unit_group(5).unwrap();
        assert_eq!((g5.generators.clone(), g5.orders.clone()), (vec![2], vec![4]));
        let g9 = unit_group(9).unwrap();
        assert_eq!((g9.generators.clone(), g9.orders.clone()), (vec![2], vec![6]));
        let g15 = unit_group(15).unwrap();
        assert_eq!(g15.orders, vec![2, 4]);
        assert_eq!(multiplicative_order(g15.generators[0], 15), 2);
        assert_eq!(multiplicative_order(g15.generators[1], 15), 4);
    }

    #[test]
    fn unit_group_enumerates_each_unit_once() {
        for d in (3..=200).step_by(2) {
            let g = unit_group(d).unwrap();
            assert_eq!(g.order(), euler_phi(d));
            let mut seen: Vec<u64> = g.exponent_tuples().iter().map(|e| g.element(e)).collect();
            seen.sort_unstable();
            assert_eq!(seen, units(d), "d = {d}");
        }
    }

    #[test]
    fn inverses() {
        assert_eq!(mod_inverse(2, 5), Some(3));
        assert_eq!(mod_inverse(-1, 7), Some(6));
        assert_eq!(mod_inverse(3, 9), None);
    }
}
