//! Generalized Cartan matrices and Kac-Moody root data over concrete lattices
//! `Z^m`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A validated generalized Cartan matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct GeneralizedCartanMatrix {
    n: usize,
    a: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
struct GcmJson {
    n: Option<usize>,
    a: Vec<Vec<i64>>,
}

impl<'de> Deserialize<'de> for GeneralizedCartanMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = GcmJson::deserialize(d)?;
        if let Some(n) = raw.n {
            if n != raw.a.len() {
                return Err(serde::de::Error::custom(format!("declared n = {n} but matrix has {} rows", raw.a.len())));
            }
        }
        validate_gcm(raw.a).map_err(serde::de::Error::custom)
    }
}

/// Checks the three defining conditions and returns the validated matrix.
/// The first violation found in row-major order is reported.
pub fn validate_gcm(a: Vec<Vec<i64>>) -> Result<GeneralizedCartanMatrix> {
    let n = a.len();
    if n == 0 {
        return Err(Error::Empty);
    }
    for (row, r) in a.iter().enumerate() {
        if r.len() != n {
            return Err(Error::NotSquare { row, len: r.len(), n });
        }
    }
    for i in 0..n {
        if a[i][i] != 2 {
            return Err(Error::DiagonalNotTwo { i, value: a[i][i] });
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if a[i][j] > 0 {
                return Err(Error::PositiveOffDiagonal { i, j, value: a[i][j] });
            }
            if a[i][j] == 0 && a[j][i] != 0 {
                return Err(Error::ZeroAsymmetry { i, j, value: a[j][i] });
            }
        }
    }
    Ok(GeneralizedCartanMatrix { n, a })
}

impl GeneralizedCartanMatrix {
    pub fn new(a: Vec<Vec<i64>>) -> Result<Self> {
        validate_gcm(a)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.a[i][j]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.a
    }

    pub fn transpose(&self) -> Self {
        let a = (0..self.n).map(|i| (0..self.n).map(|j| self.a[j][i]).collect()).collect();
        GeneralizedCartanMatrix { n: self.n, a }
    }

    /// Principal submatrix on the given (sorted or not) index list.
    pub fn restrict(&self, idx: &[usize]) -> Self {
        let a = idx.iter().map(|&i| idx.iter().map(|&j| self.a[i][j]).collect()).collect();
        GeneralizedCartanMatrix { n: idx.len(), a }
    }

    /// Block-diagonal sum of two matrices.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let n = self.n + other.n;
        let mut a = vec![vec![0; n]; n];
        for i in 0..self.n {
            for j in 0..self.n {
                a[i][j] = self.a[i][j];
            }
        }
        for i in 0..other.n {
            for j in 0..other.n {
                a[self.n + i][self.n + j] = other.a[i][j];
            }
        }
        GeneralizedCartanMatrix { n, a }
    }

    pub fn a1() -> Self {
        validate_gcm(vec![vec![2]]).unwrap()
    }

    pub fn a2() -> Self {
        validate_gcm(vec![vec![2, -1], vec![-1, 2]]).unwrap()
    }

    /// `B2` with `a[1][0] = -2`.
    pub fn b2() -> Self {
        validate_gcm(vec![vec![2, -1], vec![-2, 2]]).unwrap()
    }

    pub fn g2() -> Self {
        validate_gcm(vec![vec![2, -1], vec![-3, 2]]).unwrap()
    }

    /// Affine `A1`; its Weyl group is the infinite dihedral group.
    pub fn affine_a1() -> Self {
        validate_gcm(vec![vec![2, -2], vec![-2, 2]]).unwrap()
    }

    /// Affine `A2` (the 3-cycle diagram).
    pub fn affine_a2() -> Self {
        validate_gcm(vec![vec![2, -1, -1], vec![-1, 2, -1], vec![-1, -1, 2]]).unwrap()
    }

    /// Affine `A_{n-1}` for `n >= 2`, the type of `SL_n` over Laurent polynomials.
    pub fn affine_a(n: usize) -> Self {
        assert!(n >= 2);
        if n == 2 {
            return Self::affine_a1();
        }
        let mut a = vec![vec![0; n]; n];
        for i in 0..n {
            a[i][i] = 2;
            a[i][(i + 1) % n] = -1;
            a[(i + 1) % n][i] = -1;
        }
        validate_gcm(a).unwrap()
    }

    /// Finite `A_{n-1}`.
    pub fn finite_a(n: usize) -> Self {
        assert!(n >= 2);
        let m = n - 1;
        let mut a = vec![vec![0; m]; m];
        for i in 0..m {
            a[i][i] = 2;
            if i + 1 < m {
                a[i][i + 1] = -1;
                a[i + 1][i] = -1;
            }
        }
        validate_gcm(a).unwrap()
    }

    pub fn determinant(&self) -> i64 {
        determinant(&self.a)
    }
}

/// Bareiss fraction-free determinant.
pub(crate) fn determinant(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    (sign * a[n - 1][n - 1]) as i64
}

/// A Kac-Moody root datum `(I, A, Z^m, (c_i), (h_i))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KacMoodyRootDatum {
    gcm: GeneralizedCartanMatrix,
    m: usize,
    c: Vec<Vec<i64>>,
    h: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
struct DatumJson {
    gcm: GeneralizedCartanMatrix,
    m: usize,
    c: Vec<Vec<i64>>,
    h: Vec<Vec<i64>>,
}

impl<'de> Deserialize<'de> for KacMoodyRootDatum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = DatumJson::deserialize(d)?;
        KacMoodyRootDatum::new(raw.gcm, raw.m, raw.c, raw.h).map_err(serde::de::Error::custom)
    }
}

fn dot(x: &[i64], y: &[i64]) -> i64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

impl KacMoodyRootDatum {
    /// Builds a datum and checks `<h_i, c_j> = a_ij`. The families are stored
    /// verbatim; they need not be free or generating.
    pub fn new(gcm: GeneralizedCartanMatrix, m: usize, c: Vec<Vec<i64>>, h: Vec<Vec<i64>>) -> Result<Self> {
        let n = gcm.rank();
        if m == 0 {
            return Err(Error::Empty);
        }
        if c.len() != n {
            return Err(Error::DimensionMismatch { got: c.len(), expected: n });
        }
        if h.len() != n {
            return Err(Error::DimensionMismatch { got: h.len(), expected: n });
        }
        for v in c.iter().chain(h.iter()) {
            if v.len() != m {
                return Err(Error::DimensionMismatch { got: v.len(), expected: m });
            }
        }
        let d = KacMoodyRootDatum { gcm, m, c, h };
        d.check_pairing()?;
        Ok(d)
    }

    pub fn check_pairing(&self) -> Result<()> {
        let n = self.gcm.rank();
        for i in 0..n {
            for j in 0..n {
                let got = dot(&self.h[i], &self.c[j]);
                let expected = self.gcm.entry(i, j);
                if got != expected {
                    return Err(Error::PairingMismatch { i, j, got, expected });
                }
            }
        }
        Ok(())
    }

    pub fn gcm(&self) -> &GeneralizedCartanMatrix {
        &self.gcm
    }

    pub fn lattice_rank(&self) -> usize {
        self.m
    }

    pub fn base(&self) -> &[Vec<i64>] {
        &self.c
    }

    pub fn cobase(&self) -> &[Vec<i64>] {
        &self.h
    }

    pub fn pairing(&self, i: usize, j: usize) -> i64 {
        dot(&self.h[i], &self.c[j])
    }
}

/// `c_i = sum_j a_ji e_j`, `h_i = e_i^vee`.
pub fn simply_connected_datum(a: &GeneralizedCartanMatrix) -> KacMoodyRootDatum {
    let n = a.rank();
    let c = (0..n).map(|i| (0..n).map(|j| a.entry(j, i)).collect()).collect();
    let h = (0..n).map(|i| unit(n, i)).collect();
    KacMoodyRootDatum::new(a.clone(), n, c, h).expect("pairing holds by construction")
}

/// `c_i = e_i`, `h_i = sum_j a_ij e_j^vee`.
pub fn minimal_adjoint_datum(a: &GeneralizedCartanMatrix) -> KacMoodyRootDatum {
    let n = a.rank();
    let c = (0..n).map(|i| unit(n, i)).collect();
    let h = (0..n).map(|i| a.rows()[i].clone()).collect();
    KacMoodyRootDatum::new(a.clone(), n, c, h).expect("pairing holds by construction")
}

/// `(I, A^t, Lambda^vee, (h_i), (c_i))`.
pub fn dual_datum(d: &KacMoodyRootDatum) -> KacMoodyRootDatum {
    KacMoodyRootDatum::new(d.gcm.transpose(), d.m, d.h.clone(), d.c.clone()).expect("transposed pairing holds")
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}
