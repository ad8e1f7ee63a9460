//! Integer matrices over arbitrary-precision integers, Smith normal form,
//! abelian invariants and the homology of surface-bundle covers.

mod matrix;
mod snf;

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::presentations::Presentation;

pub use matrix::IntegerMatrix;
pub use snf::{smith_diagonal, smith_normal_form, SnfResult};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("expected determinant 1, got {0}")]
    DeterminantNotOne(BigInt),
    #[error("form matrix is not antisymmetric")]
    NotAntisymmetric,
    #[error("unknown named matrix {0:?}")]
    UnknownMatrix(String),
}

/// Invariant factors of a finitely generated abelian group.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianInvariants {
    /// Divisibility chain `d1 | d2 | ...`, each at least 2.
    pub torsion: Vec<BigUint>,
    pub free_rank: usize,
}

impl AbelianInvariants {
    /// Builds from SNF diagonal entries of a relation matrix with
    /// `n_generators` columns.
    pub fn from_diagonal(diagonal: &[BigInt], n_generators: usize) -> Self {
        let rank = diagonal.iter().filter(|d| !d.is_zero()).count();
        let torsion = diagonal
            .iter()
            .filter(|d| d.abs() > BigInt::one())
            .map(|d| d.magnitude().clone())
            .collect();
        AbelianInvariants {
            torsion,
            free_rank: n_generators - rank,
        }
    }

    pub fn from_parts(torsion: Vec<u64>, free_rank: usize) -> Self {
        AbelianInvariants {
            torsion: torsion.into_iter().map(BigUint::from).collect(),
            free_rank,
        }
    }

    /// Parses the bracketed rendering, e.g. `[ 5, 55, 0 ]` or `[5,55,0]`.
    pub fn parse(text: &str) -> Option<Self> {
        let inner = text.trim().strip_prefix('[')?.strip_suffix(']')?.trim();
        let mut torsion = Vec::new();
        let mut free_rank = 0;
        if !inner.is_empty() {
            for item in inner.split(',') {
                let v: BigUint = item.trim().parse().ok()?;
                if v.is_zero() {
                    free_rank += 1;
                } else if free_rank > 0 || v == BigUint::one() {
                    return None;
                } else {
                    torsion.push(v);
                }
            }
        }
        let chain_ok = torsion
            .windows(2)
            .all(|w| (&w[1] % &w[0]).is_zero());
        chain_ok.then_some(AbelianInvariants { torsion, free_rank })
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigUint {
        self.torsion.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }

    /// Torsion entries followed by one zero per free factor.
    pub fn as_list(&self) -> Vec<BigUint> {
        let mut v = self.torsion.clone();
        v.extend(std::iter::repeat(BigUint::zero()).take(self.free_rank));
        v
    }
}

impl fmt::Display for AbelianInvariants {
    /// Bracket-and-spaces style: `[ 5, 55, 0 ]`; the trivial group is `[]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.as_list().iter().map(BigUint::to_string).collect();
        if items.is_empty() {
            write!(f, "[]")
        } else {
            write!(f, "[ {} ]", items.join(", "))
        }
    }
}

/// Relators-by-generators matrix of exponent sums.
pub fn relation_matrix(p: &Presentation) -> IntegerMatrix {
    let n = p.n_generators();
    let mut m = IntegerMatrix::zeros(p.relators().len(), n);
    for (i, r) in p.relators().iter().enumerate() {
        for (g, e) in r.exponent_sums(n).into_iter().enumerate() {
            m[(i, g)] = BigInt::from(e);
        }
    }
    m
}

/// Abelian invariants of the group presented by `p`.
pub fn abelian_invariants(p: &Presentation) -> AbelianInvariants {
    let m = relation_matrix(p);
    AbelianInvariants::from_diagonal(&smith_diagonal(&m), p.n_generators())
}

fn require_square(m: &IntegerMatrix) -> Result<(), LinalgError> {
    if m.is_square() {
        Ok(())
    } else {
        Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        })
    }
}

/// First homology of the mapping torus with monodromy `a^d`:
/// `Z + coker(a^d - I)`.
pub fn mapping_torus_h1(a: &IntegerMatrix, d: u64) -> Result<AbelianInvariants, LinalgError> {
    require_square(a)?;
    let b = a.pow(d)?.checked_sub(&IntegerMatrix::identity(a.rows()))?;
    let mut inv = AbelianInvariants::from_diagonal(&smith_diagonal(&b), b.cols());
    inv.free_rank += 1;
    Ok(inv)
}

/// `|tr(psi^d) - 2|` for a 2x2 matrix of determinant 1.
pub fn torus_bundle_torsion(psi: &IntegerMatrix, d: u64) -> Result<BigUint, LinalgError> {
    if psi.rows() != 2 || psi.cols() != 2 {
        return Err(LinalgError::DimensionMismatch(format!(
            "expected 2x2, got {}x{}",
            psi.rows(),
            psi.cols()
        )));
    }
    let det = &psi[(0, 0)] * &psi[(1, 1)] - &psi[(0, 1)] * &psi[(1, 0)];
    if !det.is_one() {
        return Err(LinalgError::DeterminantNotOne(det));
    }
    let tr = psi.pow(d)?.trace();
    Ok((tr - BigInt::from(2)).magnitude().clone())
}

/// Monic characteristic polynomial `det(tI - m)`, coefficients from the
/// leading term down. Faddeev–LeVerrier; every division is exact.
pub fn char_poly(m: &IntegerMatrix) -> Result<Vec<BigInt>, LinalgError> {
    require_square(m)?;
    let n = m.rows();
    let mut coeffs = vec![BigInt::one()];
    let mut mk = IntegerMatrix::zeros(n, n);
    let identity = IntegerMatrix::identity(n);
    for k in 1..=n {
        let prev = coeffs.last().unwrap().clone();
        let mut next = m * &mk;
        for i in 0..n {
            next[(i, i)] += &prev * &identity[(i, i)];
        }
        mk = next;
        let c = -(m * &mk).trace() / BigInt::from(k);
        coeffs.push(c);
    }
    Ok(coeffs)
}

/// Renders descending coefficients as a polynomial in `t`.
pub fn render_poly(coeffs: &[BigInt]) -> String {
    let deg = coeffs.len().saturating_sub(1);
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let power = deg - i;
        let abs = c.abs();
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        let show_coeff = !abs.is_one() || power == 0;
        if show_coeff {
            out.push_str(&abs.to_string());
        }
        match power {
            0 => {}
            1 => out.push('t'),
            _ => out.push_str(&format!("t^{power}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Matrix of `x -> x + (x^T j c) c`, the homology action of a right-handed
/// Dehn twist about a curve with class `c`.
pub fn transvection(c: &[BigInt], j: &IntegerMatrix) -> Result<IntegerMatrix, LinalgError> {
    require_square(j)?;
    if c.len() != j.rows() {
        return Err(LinalgError::DimensionMismatch(format!(
            "vector of length {} for a {}x{} form",
            c.len(),
            j.rows(),
            j.cols()
        )));
    }
    if !j.is_antisymmetric() {
        return Err(LinalgError::NotAntisymmetric);
    }
    let n = c.len();
    let jc: Vec<BigInt> = (0..n)
        .map(|i| (0..n).map(|k| &j[(i, k)] * &c[k]).sum())
        .collect();
    let mut m = IntegerMatrix::identity(n);
    for r in 0..n {
        for s in 0..n {
            m[(r, s)] += &c[r] * &jc[s];
        }
    }
    Ok(m)
}

/// The standard symplectic form on `Z^{2g}`, blocks `[[0,1],[-1,0]]`.
pub fn standard_symplectic_form(genus: usize) -> IntegerMatrix {
    let mut j = IntegerMatrix::zeros(2 * genus, 2 * genus);
    for b in 0..genus {
        j[(2 * b, 2 * b + 1)] = BigInt::one();
        j[(2 * b + 1, 2 * b)] = -BigInt::one();
    }
    j
}

/// Monodromy of the once-punctured torus bundle for the sister of the
/// figure-eight knot complement.
pub fn phi_s() -> IntegerMatrix {
    IntegerMatrix::from_i64_rows(&[[-3, 1], [-1, 0]])
}

/// Genus-2 fibered monodromy in the basis {a, f, c, d}.
pub fn weeks_cover_monodromy() -> IntegerMatrix {
    IntegerMatrix::from_i64_rows(&[[0, 1, 2, 1], [-1, 1, 2, 1], [0, 0, 2, 1], [1, 0, -1, 0]])
}

/// Sixth power of [`weeks_cover_monodromy`], as tabulated.
pub fn weeks_cover_monodromy_sixth() -> IntegerMatrix {
    IntegerMatrix::from_i64_rows(&[[18, 17, 88, 57], [9, 9, 48, 31], [14, 12, 66, 43], [3, 2, 9, 6]])
}

/// Names accepted by [`named_matrix`].
pub const MATRIX_NAMES: [&str; 3] = ["phi_s", "A", "A6"];

pub fn named_matrix(name: &str) -> Result<IntegerMatrix, LinalgError> {
    match name {
        "phi_s" => Ok(phi_s()),
        "A" => Ok(weeks_cover_monodromy()),
        "A6" => Ok(weeks_cover_monodromy_sixth()),
        _ => Err(LinalgError::UnknownMatrix(name.to_string())),
    }
}

/// Parses `[[a,b],[c,d]]` (whitespace allowed) or a name from
/// [`MATRIX_NAMES`].
pub fn parse_matrix(text: &str) -> Result<IntegerMatrix, LinalgError> {
    let t = text.trim();
    if !t.starts_with('[') {
        return named_matrix(t);
    }
    let rows: Vec<Vec<i64>> = serde_json::from_str::<Vec<Vec<serde_json::Value>>>(t)
        .map_err(|e| LinalgError::DimensionMismatch(format!("bad matrix literal: {e}")))?
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|v| {
                    v.as_i64().ok_or_else(|| {
                        LinalgError::DimensionMismatch(format!("non-integer entry {v}"))
                    })
                })
                .collect::<Result<Vec<i64>, _>>()
        })
        .collect::<Result<_, _>>()?;
    IntegerMatrix::from_rows(&rows)
}

/// Small helper for tests and callers holding machine integers.
pub fn to_bigints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Converts descending coefficients to machine integers when they fit.
pub fn coeffs_to_i64(coeffs: &[BigInt]) -> Option<Vec<i64>> {
    coeffs.iter().map(ToPrimitive::to_i64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::{catalog, parse_presentation, CatalogKey};
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> IntegerMatrix {
        let v: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        IntegerMatrix::from_rows(&v).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        to_bigints(v)
    }

    fn diag_matrix(rows: usize, cols: usize, d: &[BigInt]) -> IntegerMatrix {
        let mut out = IntegerMatrix::zeros(rows, cols);
        for (i, x) in d.iter().enumerate() {
            out[(i, i)] = x.clone();
        }
        out
    }

    /// Fraction-free Gaussian elimination determinant.
    fn bareiss_det(m: &IntegerMatrix) -> BigInt {
        let n = m.rows();
        let mut a = m.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        if n == 0 {
            BigInt::one()
        } else {
            sign * &a[n - 1][n - 1]
        }
    }

    fn check_snf(mat: &IntegerMatrix) {
        let r = smith_normal_form(mat);
        let prod = &(&r.left * mat) * &r.right;
        assert_eq!(prod, diag_matrix(mat.rows(), mat.cols(), &r.d));
        assert_eq!(bareiss_det(&r.left).abs(), BigInt::one());
        assert_eq!(bareiss_det(&r.right).abs(), BigInt::one());
        let nonzero: Vec<&BigInt> = r.d.iter().take_while(|x| !x.is_zero()).collect();
        assert!(r.d[nonzero.len()..].iter().all(Zero::is_zero));
        for w in nonzero.windows(2) {
            assert!((w[1] % w[0]).is_zero());
        }
        assert!(r.d.iter().all(|x| !x.is_negative()));
        assert_eq!(smith_diagonal(mat), r.d);
    }

    #[test]
    fn snf_examples() {
        assert_eq!(smith_normal_form(&IntegerMatrix::identity(3)).d, ints(&[1, 1, 1]));
        assert_eq!(smith_normal_form(&m(&[&[2, 0], &[0, 3]])).d, ints(&[1, 6]));
        let a6 = weeks_cover_monodromy_sixth();
        let b = a6.checked_sub(&IntegerMatrix::identity(4)).unwrap();
        assert_eq!(smith_normal_form(&b).d, ints(&[1, 1, 5, 55]));
        check_snf(&b);
        check_snf(&m(&[&[0, 0], &[0, 0], &[0, 0]]));
        check_snf(&IntegerMatrix::zeros(0, 3));
    }

    #[test]
    fn sixth_power_matches_table() {
        let a = weeks_cover_monodromy();
        assert_eq!(a.pow(6).unwrap(), weeks_cover_monodromy_sixth());
        let repeated = (0..5).fold(a.clone(), |acc, _| &acc * &a);
        assert_eq!(repeated, weeks_cover_monodromy_sixth());
    }

    #[test]
    fn abelian_invariants_of_catalog() {
        let aqi = |k| abelian_invariants(catalog(k)).to_string();
        assert_eq!(aqi(CatalogKey::Gamma), "[ 3 ]");
        assert_eq!(aqi(CatalogKey::GammaW), "[ 5, 5 ]");
        assert_eq!(aqi(CatalogKey::Lambda0), "[ 2, 2 ]");
        assert_eq!(aqi(CatalogKey::Gamma0), "[ 2 ]");
        assert_eq!(aqi(CatalogKey::Lambda1), "[ 2 ]");
        assert_eq!(aqi(CatalogKey::Lambda2), "[ 6 ]");
        let free = parse_presentation("group<a,b | >").unwrap();
        assert_eq!(abelian_invariants(&free).to_string(), "[ 0, 0 ]");
        let trivial = parse_presentation("group<a | a>").unwrap();
        assert_eq!(abelian_invariants(&trivial).to_string(), "[]");
    }

    #[test]
    fn invariants_parse_round_trip() {
        for s in ["[ 5, 55, 0 ]", "[]", "[ 0, 0 ]", "[ 3 ]"] {
            assert_eq!(AbelianInvariants::parse(s).unwrap().to_string(), s);
        }
        assert_eq!(
            AbelianInvariants::parse("[5,30]").unwrap(),
            AbelianInvariants::from_parts(vec![5, 30], 0)
        );
        assert!(AbelianInvariants::parse("[ 0, 5 ]").is_none());
        assert!(AbelianInvariants::parse("[ 2, 3 ]").is_none());
        assert!(AbelianInvariants::parse("[ 1 ]").is_none());
    }

    #[test]
    fn mapping_tori() {
        assert_eq!(mapping_torus_h1(&phi_s(), 1).unwrap().to_string(), "[ 5, 0 ]");
        assert_eq!(
            mapping_torus_h1(&IntegerMatrix::identity(4), 1).unwrap().to_string(),
            "[ 0, 0, 0, 0, 0 ]"
        );
        let h = mapping_torus_h1(&weeks_cover_monodromy(), 6).unwrap();
        assert_eq!(h.to_string(), "[ 5, 55, 0 ]");
        assert_eq!(h.torsion_order(), BigUint::from(275u32));
        assert_eq!(
            mapping_torus_h1(&phi_s(), 4).unwrap().torsion_order(),
            BigUint::from(45u32)
        );
        assert!(matches!(
            mapping_torus_h1(&IntegerMatrix::zeros(2, 3), 1),
            Err(LinalgError::NotSquare { .. })
        ));
    }

    #[test]
    fn torus_torsion() {
        let t = |d| torus_bundle_torsion(&phi_s(), d).unwrap();
        assert_eq!(t(1), BigUint::from(5u32));
        assert_eq!(t(2), BigUint::from(5u32));
        assert_eq!(t(4), BigUint::from(45u32));
        // Traces of phi_s^d computed by hand from t^2 + 3t + 1.
        let expected: [u64; 10] = [5, 5, 20, 45, 125, 320, 845, 2205, 5780, 15125];
        for d in 1..=10u64 {
            assert_eq!(t(d), BigUint::from(expected[d as usize - 1]));
        }
        assert_eq!(
            torus_bundle_torsion(&IntegerMatrix::identity(2), 7).unwrap(),
            BigUint::zero()
        );
        assert!(matches!(
            torus_bundle_torsion(&m(&[&[2, 0], &[0, 1]]), 1),
            Err(LinalgError::DeterminantNotOne(_))
        ));
    }

    #[test]
    fn characteristic_polynomials() {
        assert_eq!(char_poly(&IntegerMatrix::identity(2)).unwrap(), ints(&[1, -2, 1]));
        assert_eq!(char_poly(&phi_s()).unwrap(), ints(&[1, 3, 1]));
        let cp = char_poly(&weeks_cover_monodromy()).unwrap();
        assert_eq!(cp, ints(&[1, -3, 3, -3, 1]));
        assert_eq!(render_poly(&cp), "t^4 - 3t^3 + 3t^2 - 3t + 1");
        assert_eq!(render_poly(&ints(&[1, 3, 1])), "t^2 + 3t + 1");
        assert_eq!(weeks_cover_monodromy().determinant().unwrap(), BigInt::one());
    }

    #[test]
    fn transvections() {
        let j = standard_symplectic_form(1);
        let ta = transvection(&ints(&[1, 0]), &j).unwrap();
        assert_eq!(ta, m(&[&[1, -1], &[0, 1]]));
        assert_eq!(ta.trace(), BigInt::from(2));
        let tb = transvection(&ints(&[0, 1]), &j).unwrap();
        let comp = &ta * &tb;
        assert_eq!(comp.trace(), BigInt::one());
        assert_eq!(comp.pow(6).unwrap(), IntegerMatrix::identity(2));
        assert!(matches!(
            transvection(&ints(&[1, 0, 0]), &j),
            Err(LinalgError::DimensionMismatch(_))
        ));
        assert!(matches!(
            transvection(&ints(&[1, 0]), &IntegerMatrix::identity(2)),
            Err(LinalgError::NotAntisymmetric)
        ));
    }

    #[test]
    fn matrix_literals() {
        assert_eq!(parse_matrix("[[-3, 1], [-1, 0]]").unwrap(), phi_s());
        assert_eq!(parse_matrix("A6").unwrap(), weeks_cover_monodromy_sixth());
        assert!(parse_matrix("B").is_err());
        assert!(parse_matrix("[[1,2],[3]]").is_err());
        assert_eq!(phi_s().to_string(), "[[-3,1],[-1,0]]");
    }

    fn small_matrix() -> impl Strategy<Value = IntegerMatrix> {
        (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-9i64..=9, r * c).prop_map(move |v| {
                IntegerMatrix::from_entries(r, c, to_bigints(&v)).unwrap()
            })
        })
    }

    fn square_matrix() -> impl Strategy<Value = IntegerMatrix> {
        (1usize..=6).prop_flat_map(|n| {
            proptest::collection::vec(-9i64..=9, n * n)
                .prop_map(move |v| IntegerMatrix::from_entries(n, n, to_bigints(&v)).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn snf_witnesses_verify(mat in small_matrix()) {
            check_snf(&mat);
        }
    }

    proptest! {
        #[test]
        fn snf_product_is_abs_det(mat in square_matrix()) {
            let d: BigInt = smith_diagonal(&mat).iter().product();
            prop_assert_eq!(d, bareiss_det(&mat).abs());
            prop_assert_eq!(mat.determinant().unwrap(), bareiss_det(&mat));
        }

        #[test]
        fn torus_formula_matches_h1(a in -6i64..=6, b in -6i64..=6, c in -6i64..=6, d in 1u64..=5) {
            // Build det-1 matrices [[a, b], [c, (1 + b c) / a]] when integral.
            prop_assume!(a != 0 && (1 + b * c) % a == 0);
            let psi = m(&[&[a, b], &[c, (1 + b * c) / a]]);
            let tr = psi.pow(d).unwrap().trace();
            prop_assume!(tr != BigInt::from(2));
            let h = mapping_torus_h1(&psi, d).unwrap();
            prop_assert_eq!(h.free_rank, 1);
            prop_assert_eq!(h.torsion_order(), torus_bundle_torsion(&psi, d).unwrap());
        }

        #[test]
        fn transvections_are_symplectic(g in 1usize..=3, seed in proptest::collection::vec(-4i64..=4, 6)) {
            let j = standard_symplectic_form(g);
            let c = to_bigints(&seed[..2 * g]);
            let t = transvection(&c, &j).unwrap();
            prop_assert_eq!(&(&t.transpose() * &j) * &t, j);
            prop_assert_eq!(bareiss_det(&t), BigInt::one());
        }

        #[test]
        fn invariants_ignore_relator_order(rot in 0usize..6) {
            let p = catalog(CatalogKey::Gamma);
            let mut rels = p.relators().to_vec();
            rels.rotate_left(rot);
            let renamed = Presentation::new(vec!["u".into(), "v".into(), "w".into()], rels).unwrap();
            prop_assert_eq!(abelian_invariants(&renamed), abelian_invariants(p));
        }
    }
}
