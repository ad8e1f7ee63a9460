//! Prime splitting in low-degree number fields by factoring the minimal
//! polynomial modulo p, the congruence-quotient catalog of the Eisenstein
//! Bianchi group, and orders of PSL(2, q).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("discriminant {0} is not squarefree")]
    NonSquarefreeDiscriminant(i64),
    #[error("minimal polynomials of degree {0} are not supported (degree 1 to 3 only)")]
    UnsupportedDegree(usize),
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial has a rational root, so it is not irreducible")]
    Reducible,
    #[error("cannot parse field {0:?}")]
    BadField(String),
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Primes up to and including `n`.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| is_prime(p)).collect()
}

fn is_squarefree(n: i64) -> bool {
    let mut n = n.unsigned_abs();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return false;
            }
        }
        d += 1;
    }
    true
}

/// A number field given by a monic irreducible integer polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    /// Coefficients from the leading term down; the leading one is 1.
    pub min_poly: Vec<i64>,
    pub label: String,
}

impl FieldSpec {
    /// `Q(omega)` with `omega^2 + omega + 1 = 0`.
    pub fn qomega() -> Self {
        FieldSpec {
            min_poly: vec![1, 1, 1],
            label: "Qomega".into(),
        }
    }

    /// The cubic field with `theta^3 - theta^2 + 1 = 0`.
    pub fn kweeks() -> Self {
        FieldSpec {
            min_poly: vec![1, -1, 0, 1],
            label: "Kweeks".into(),
        }
    }

    pub fn new(min_poly: Vec<i64>, label: impl Into<String>) -> Result<Self, ArithError> {
        let f = FieldSpec {
            min_poly,
            label: label.into(),
        };
        if f.min_poly.first() != Some(&1) {
            return Err(ArithError::NotMonic);
        }
        let deg = f.degree();
        if !(1..=3).contains(&deg) {
            return Err(ArithError::UnsupportedDegree(deg));
        }
        if deg > 1 && f.has_integer_root() {
            return Err(ArithError::Reducible);
        }
        Ok(f)
    }

    pub fn degree(&self) -> usize {
        self.min_poly.len().saturating_sub(1)
    }

    fn eval(&self, x: i64) -> i128 {
        self.min_poly
            .iter()
            .fold(0i128, |acc, &c| acc * x as i128 + c as i128)
    }

    /// Rational roots of a monic integer polynomial are integer divisors of
    /// the constant term.
    fn has_integer_root(&self) -> bool {
        let c = *self.min_poly.last().unwrap();
        if c == 0 {
            return true;
        }
        let c = c.unsigned_abs() as i64;
        (1..=c)
            .filter(|d| c % d == 0)
            .any(|d| self.eval(d) == 0 || self.eval(-d) == 0)
    }

    /// Polynomial discriminant (equal to the field discriminant when it is
    /// squarefree).
    pub fn discriminant(&self) -> i64 {
        match self.min_poly.as_slice() {
            [_, _] => 1,
            [_, b, c] => b * b - 4 * c,
            [_, a, b, c] => {
                let (a, b, c) = (*a, *b, *c);
                a * a * b * b - 4 * b * b * b - 4 * a * a * a * c - 27 * c * c + 18 * a * b * c
            }
            _ => 0,
        }
    }

    pub fn builtin(label: &str) -> Option<Self> {
        match label.to_ascii_lowercase().as_str() {
            "qomega" => Some(FieldSpec::qomega()),
            "kweeks" => Some(FieldSpec::kweeks()),
            _ => None,
        }
    }
}

impl FromStr for FieldSpec {
    type Err = ArithError;

    /// A built-in label, or a polynomial in `x` such as `x^3 - x^2 + 1`.
    fn from_str(s: &str) -> Result<Self, ArithError> {
        if let Some(f) = FieldSpec::builtin(s.trim()) {
            return Ok(f);
        }
        let coeffs = parse_poly(s).ok_or_else(|| ArithError::BadField(s.to_string()))?;
        FieldSpec::new(coeffs, s.trim())
    }
}

/// Parses a polynomial in `x` with integer coefficients into descending
/// coefficients.
fn parse_poly(s: &str) -> Option<Vec<i64>> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return None;
    }
    let mut terms: Vec<(i64, usize)> = Vec::new();
    let mut rest = compact.as_str();
    while !rest.is_empty() {
        let (sign, body) = match rest.as_bytes()[0] {
            b'+' => (1, &rest[1..]),
            b'-' => (-1, &rest[1..]),
            _ if terms.is_empty() => (1, rest),
            _ => return None,
        };
        let end = body.find(['+', '-']).unwrap_or(body.len());
        let term = &body[..end];
        rest = &body[end..];
        let (coeff, power) = match term.find('x') {
            None => (term.parse::<i64>().ok()?, 0),
            Some(i) => {
                let c = match term[..i].trim_end_matches('*') {
                    "" => 1,
                    t => t.parse::<i64>().ok()?,
                };
                let p = match &term[i + 1..] {
                    "" => 1,
                    t => t.strip_prefix('^')?.parse::<usize>().ok()?,
                };
                (c, p)
            }
        };
        terms.push((sign * coeff, power));
    }
    let deg = terms.iter().map(|t| t.1).max()?;
    let mut out = vec![0i64; deg + 1];
    for (c, p) in terms {
        out[deg - p] += c;
    }
    Some(out)
}

/// One prime of the field above `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimeFactor {
    pub residue_degree: usize,
    pub ramification: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeSplitting {
    pub p: u64,
    /// Sorted by residue degree ascending, then ramification descending.
    pub factors: Vec<PrimeFactor>,
}

impl PrimeSplitting {
    /// `(f, e)` pairs in order.
    pub fn pattern(&self) -> Vec<(usize, usize)> {
        self.factors
            .iter()
            .map(|f| (f.residue_degree, f.ramification))
            .collect()
    }

    pub fn is_ramified(&self) -> bool {
        self.factors.iter().any(|f| f.ramification > 1)
    }

    /// Norms `p^f` of the primes above `p`.
    pub fn norms(&self) -> Vec<BigUint> {
        self.factors
            .iter()
            .map(|f| BigUint::from(self.p).pow(f.residue_degree as u32))
            .collect()
    }
}

impl fmt::Display for PrimeSplitting {
    /// `p: (e,f) (e,f) ...`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.p)?;
        for x in &self.factors {
            write!(f, " ({},{})", x.ramification, x.residue_degree)?;
        }
        Ok(())
    }
}

/// Synthetic division of `poly` (descending, mod p) by `x - r`.
fn divide_linear(poly: &[u64], r: u64, p: u64) -> (Vec<u64>, u64) {
    let mut q = Vec::with_capacity(poly.len().saturating_sub(1));
    let mut acc = 0u64;
    for (i, &c) in poly.iter().enumerate() {
        acc = (acc * r + c) % p;
        if i + 1 < poly.len() {
            q.push(acc);
        }
    }
    (q, acc)
}

/// Factorization pattern of the minimal polynomial modulo `p`.
pub fn split_prime(field: &FieldSpec, p: u64) -> Result<PrimeSplitting, ArithError> {
    if !is_prime(p) {
        return Err(ArithError::NotPrime(p));
    }
    let deg = field.degree();
    if !(1..=3).contains(&deg) {
        return Err(ArithError::UnsupportedDegree(deg));
    }
    let disc = field.discriminant();
    if !is_squarefree(disc) {
        return Err(ArithError::NonSquarefreeDiscriminant(disc));
    }
    let pi = p as i64;
    let mut poly: Vec<u64> = field
        .min_poly
        .iter()
        .map(|&c| c.rem_euclid(pi) as u64)
        .collect();
    let mut factors = Vec::new();
    let mut r = 0;
    while r < p && poly.len() > 1 {
        let mut e = 0;
        loop {
            let (q, rem) = divide_linear(&poly, r, p);
            if rem != 0 {
                break;
            }
            poly = q;
            e += 1;
        }
        if e > 0 {
            factors.push(PrimeFactor {
                residue_degree: 1,
                ramification: e,
            });
        }
        r += 1;
    }
    // A rootless remainder of degree at most 3 is irreducible.
    if poly.len() > 1 {
        factors.push(PrimeFactor {
            residue_degree: poly.len() - 1,
            ramification: 1,
        });
    }
    factors.sort_by(|a, b| {
        a.residue_degree
            .cmp(&b.residue_degree)
            .then(b.ramification.cmp(&a.ramification))
    });
    Ok(PrimeSplitting { p, factors })
}

/// Congruence quotients `PSL(2, F_q)` of `PSL(2, Z[omega])` at a rational
/// prime: `(q, multiplicity)` pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceQuotient {
    pub p: u64,
    pub targets: Vec<(u64, usize)>,
}

/// One quotient per prime of `Z[omega]` above `p`, with field size the
/// norm of that prime.
pub fn bianchi_quotient_catalog(p: u64) -> Result<CongruenceQuotient, ArithError> {
    let s = split_prime(&FieldSpec::qomega(), p)?;
    let mut targets: Vec<(u64, usize)> = Vec::new();
    for f in &s.factors {
        let q = p.pow(f.residue_degree as u32);
        match targets.iter_mut().find(|(t, _)| *t == q) {
            Some((_, m)) => *m += 1,
            None => targets.push((q, 1)),
        }
    }
    Ok(CongruenceQuotient { p, targets })
}

/// Returns `(p, n)` with `q = p^n`, if `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut n = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        n += 1;
    }
    (r == 1).then_some((p, n))
}

/// `|PSL(2, F_q)| = q (q - 1) (q + 1) / gcd(2, q - 1)`.
pub fn psl2_order(q: u64) -> Result<BigUint, ArithError> {
    prime_power(q).ok_or(ArithError::NotPrimePower(q))?;
    let q = BigUint::from(q);
    let one = BigUint::from(1u32);
    let n = &q * (&q - &one) * (&q + &one);
    Ok(if q.bit(0) { n / 2u32 } else { n })
}

/// Ramification of a quaternion algebra, recorded as data only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuaternionRamification {
    pub field: &'static str,
    pub ramified_places: &'static [&'static str],
}

/// The matrix algebra over `Q(omega)` and the invariant quaternion algebra
/// of the Weeks manifold.
pub const QUATERNION_DATA: [QuaternionRamification; 2] = [
    QuaternionRamification {
        field: "Qomega",
        ramified_places: &[],
    },
    QuaternionRamification {
        field: "Kweeks",
        ramified_places: &["real place", "place of norm 5"],
    },
];

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(f: &FieldSpec, p: u64) -> Vec<(usize, usize)> {
        split_prime(f, p).unwrap().pattern()
    }

    /// Multiplies polynomials (descending coefficients) mod p.
    fn mul_mod(a: &[i64], b: &[i64], p: i64) -> Vec<i64> {
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y).rem_euclid(p);
            }
        }
        out
    }

    #[test]
    fn qomega_examples() {
        let f = FieldSpec::qomega();
        assert_eq!(f.discriminant(), -3);
        assert_eq!(pat(&f, 2), vec![(2, 1)]);
        assert_eq!(pat(&f, 3), vec![(1, 2)]);
        assert_eq!(pat(&f, 7), vec![(1, 1), (1, 1)]);
    }

    #[test]
    fn kweeks_examples() {
        let f = FieldSpec::kweeks();
        assert_eq!(f.discriminant(), -23);
        assert_eq!(pat(&f, 23), vec![(1, 2), (1, 1)]);
        assert_eq!(pat(&f, 5), vec![(1, 1), (2, 1)]);
        // (x - 16)^2 (x - 15) = x^3 - x^2 + 1 mod 23.
        let prod = mul_mod(&mul_mod(&[1, -16], &[1, -16], 23), &[1, -15], 23);
        assert_eq!(prod, vec![1, 22, 0, 1]);
        // Root 2 mod 5, and the cofactor x^2 + x + 2 has no roots mod 5.
        assert_eq!(mul_mod(&[1, -2], &[1, 1, 2], 5), vec![1, 4, 0, 1]);
        assert!((0..5).all(|x| (x * x + x + 2) % 5 != 0));
        assert_eq!(split_prime(&f, 5).unwrap().to_string(), "5: (1,1) (1,2)");
        assert_eq!(
            split_prime(&f, 5).unwrap().norms(),
            vec![BigUint::from(5u32), BigUint::from(25u32)]
        );
    }

    #[test]
    fn errors() {
        assert_eq!(split_prime(&FieldSpec::qomega(), 9), Err(ArithError::NotPrime(9)));
        let f = FieldSpec::new(vec![1, 0, 4], "x^2+4").unwrap();
        assert_eq!(split_prime(&f, 3), Err(ArithError::NonSquarefreeDiscriminant(-16)));
        assert_eq!(FieldSpec::new(vec![1, 0, -1], "x"), Err(ArithError::Reducible));
        assert_eq!(FieldSpec::new(vec![2, 0, 1], "x"), Err(ArithError::NotMonic));
        assert_eq!(
            FieldSpec::new(vec![1, 0, 0, 0, 1], "x"),
            Err(ArithError::UnsupportedDegree(4))
        );
        assert_eq!(psl2_order(6), Err(ArithError::NotPrimePower(6)));
    }

    #[test]
    fn field_parsing() {
        assert_eq!("Kweeks".parse::<FieldSpec>().unwrap(), FieldSpec::kweeks());
        assert_eq!("x^3 - x^2 + 1".parse::<FieldSpec>().unwrap().min_poly, vec![1, -1, 0, 1]);
        assert_eq!("x^2+x+1".parse::<FieldSpec>().unwrap().min_poly, vec![1, 1, 1]);
        assert_eq!("x^2 + 2*x + 2".parse::<FieldSpec>().unwrap().min_poly, vec![1, 2, 2]);
        assert!("x^^2".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn psl2_orders() {
        assert_eq!(psl2_order(23).unwrap(), BigUint::from(6072u32));
        assert_eq!(psl2_order(4).unwrap(), BigUint::from(60u32));
        assert_eq!(psl2_order(2).unwrap(), BigUint::from(6u32));
        assert_eq!(psl2_order(7).unwrap(), BigUint::from(168u32));
        assert_eq!(BigUint::from(23u32 * 24 * 22 / 2), BigUint::from(6072u32));
    }

    #[test]
    fn quotient_catalog() {
        assert_eq!(bianchi_quotient_catalog(2).unwrap().targets, vec![(4, 1)]);
        assert_eq!(bianchi_quotient_catalog(7).unwrap().targets, vec![(7, 2)]);
        assert_eq!(bianchi_quotient_catalog(3).unwrap().targets, vec![(3, 1)]);
        assert_eq!(bianchi_quotient_catalog(5).unwrap().targets, vec![(25, 1)]);
    }

    #[test]
    fn sweep_up_to_1000() {
        for p in primes_up_to(1000) {
            for f in [FieldSpec::qomega(), FieldSpec::kweeks()] {
                let s = split_prime(&f, p).unwrap();
                let total: usize = s.factors.iter().map(|x| x.ramification * x.residue_degree).sum();
                assert_eq!(total, f.degree());
                assert_eq!(s.is_ramified(), f.discriminant() % p as i64 == 0);
            }
            let expected = if p == 3 {
                vec![(1, 2)]
            } else if p == 2 || p % 6 == 5 {
                vec![(2, 1)]
            } else {
                vec![(1, 1), (1, 1)]
            };
            assert_eq!(pat(&FieldSpec::qomega(), p), expected);
            let q = bianchi_quotient_catalog(p).unwrap();
            let expected_targets = match expected.as_slice() {
                [(2, 1)] => vec![(p * p, 1)],
                [(1, 2)] => vec![(p, 1)],
                _ => vec![(p, 2)],
            };
            assert_eq!(q.targets, expected_targets);
        }
    }
}
