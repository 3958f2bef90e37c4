//! Dense 3-tables, their 1- and 2-marginals, and the basic checks on them.
//!
//! Storage is row-major with `i` outermost and `k` innermost. Raw accessors
//! (`at`, `Matrix::get`) are 0-based; [`EntryIndex`] is the 1-based handle used
//! at every external boundary.

use std::fmt;
use std::ops::{AddAssign, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Cell value type shared by integer tables and exact rational arrays.
pub trait Entry: Clone + Ord + Zero + fmt::Debug + for<'a> AddAssign<&'a Self> + Sub<Output = Self> {
    fn from_u64(v: u64) -> Self;

    /// Rejects negative values and, for machine integers, any batch whose
    /// total does not fit. Every partial sum of an accepted batch fits too.
    fn check_entries(values: &[Self], what: &'static str) -> Result<()>;
}

impl Entry for u64 {
    fn from_u64(v: u64) -> Self {
        v
    }

    fn check_entries(values: &[Self], what: &'static str) -> Result<()> {
        values.iter().try_fold(0u64, |acc, &v| acc.checked_add(v)).map(|_| ()).ok_or(Error::Overflow(what))
    }
}

impl Entry for BigRational {
    fn from_u64(v: u64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn check_entries(values: &[Self], what: &'static str) -> Result<()> {
        if values.iter().any(|v| v.is_negative()) {
            return Err(Error::Negative(what));
        }
        Ok(())
    }
}

/// Sizes `(r, c, h)` of a 3-table: rows, columns, layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[usize; 3]", into = "[usize; 3]")]
pub struct Dims3 {
    pub r: usize,
    pub c: usize,
    pub h: usize,
}

impl Dims3 {
    pub fn new(r: usize, c: usize, h: usize) -> Result<Self> {
        if r == 0 || c == 0 || h == 0 {
            return Err(Error::InvalidDims { r, c, h });
        }
        Ok(Self { r, c, h })
    }

    /// Sizes indexed by axis (0 = rows, 1 = columns, 2 = layers).
    pub fn sizes(&self) -> [usize; 3] {
        [self.r, self.c, self.h]
    }

    pub fn from_sizes(s: [usize; 3]) -> Result<Self> {
        Self::new(s[0], s[1], s[2])
    }

    pub fn cells(&self) -> usize {
        self.r * self.c * self.h
    }

    #[inline]
    pub(crate) fn offset(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.c + j) * self.h + k
    }
}

impl TryFrom<[usize; 3]> for Dims3 {
    type Error = Error;
    fn try_from(s: [usize; 3]) -> Result<Self> {
        Self::from_sizes(s)
    }
}

impl From<Dims3> for [usize; 3] {
    fn from(d: Dims3) -> Self {
        d.sizes()
    }
}

impl fmt::Display for Dims3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.r, self.c, self.h)
    }
}

/// 1-based coordinates of a single table entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EntryIndex {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl EntryIndex {
    pub fn new(i: usize, j: usize, k: usize) -> Self {
        Self { i, j, k }
    }

    pub fn check(&self, dims: Dims3) -> Result<()> {
        let ok = (1..=dims.r).contains(&self.i) && (1..=dims.c).contains(&self.j) && (1..=dims.h).contains(&self.k);
        if ok {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { i: self.i, j: self.j, k: self.k, r: dims.r, c: dims.c, h: dims.h })
        }
    }

    /// 0-based coordinates, indexed by axis.
    pub fn zero_based(&self) -> [usize; 3] {
        [self.i - 1, self.j - 1, self.k - 1]
    }
}

impl fmt::Display for EntryIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.i, self.j, self.k)
    }
}

/// Dense row-major 2-array.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Self { rows, cols, data: vec![value; rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for a in 0..rows {
            for b in 0..cols {
                data.push(f(a, b));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds from nested rows; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != m) {
            return Err(Error::Shape {
                what: "matrix",
                expected: format!("rows of length {m}"),
                found: format!("a row of length {}", bad.len()),
            });
        }
        Ok(Self { rows: n, cols: m, data: rows.into_iter().flatten().collect() })
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        if self.cols == 0 {
            return vec![Vec::new(); self.rows];
        }
        self.data.chunks(self.cols).map(<[T]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |a, b| self.get(b, a).clone())
    }
}

impl<T> Matrix<T> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> &T {
        &self.data[a * self.cols + b]
    }

    #[inline]
    pub(crate) fn get_mut(&mut self, a: usize, b: usize) -> &mut T {
        &mut self.data[a * self.cols + b]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, a: usize) -> &[T] {
        &self.data[a * self.cols..(a + 1) * self.cols]
    }
}

impl<T: Entry> Matrix<T> {
    pub fn row_sums(&self) -> Vec<T> {
        (0..self.rows)
            .map(|a| {
                let mut s = T::zero();
                for v in self.row(a) {
                    s += v;
                }
                s
            })
            .collect()
    }

    pub fn col_sums(&self) -> Vec<T> {
        let mut sums = vec![T::zero(); self.cols];
        for a in 0..self.rows {
            for (s, v) in sums.iter_mut().zip(self.row(a)) {
                *s += v;
            }
        }
        sums
    }

    pub fn total(&self) -> T {
        let mut s = T::zero();
        for v in &self.data {
            s += v;
        }
        s
    }
}

impl<T: Serialize + Clone> Serialize for Matrix<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de, T: DeserializeOwned + Clone> Deserialize<'de> for Matrix<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<T>>::deserialize(d)?;
        Matrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// Dense 3-array of nonnegative entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Array3<T> {
    dims: Dims3,
    data: Vec<T>,
}

/// A 3-table: nonnegative integer entries.
pub type Table3 = Array3<u64>;
/// A nonnegative exact-rational 3-array.
pub type RealTable3 = Array3<BigRational>;

impl<T: Entry> Array3<T> {
    /// `data` is in `(i, j, k)` row-major order with `k` fastest.
    pub fn new(dims: Dims3, data: Vec<T>) -> Result<Self> {
        if data.len() != dims.cells() {
            return Err(Error::Shape {
                what: "table entries",
                expected: dims.cells().to_string(),
                found: data.len().to_string(),
            });
        }
        T::check_entries(&data, "table entries")?;
        Ok(Self { dims, data })
    }

    pub fn zeros(dims: Dims3) -> Self {
        Self { dims, data: vec![T::zero(); dims.cells()] }
    }

    /// Builds from a 0-based generator.
    pub fn from_fn(dims: Dims3, mut f: impl FnMut(usize, usize, usize) -> T) -> Result<Self> {
        let mut data = Vec::with_capacity(dims.cells());
        for i in 0..dims.r {
            for j in 0..dims.c {
                for k in 0..dims.h {
                    data.push(f(i, j, k));
                }
            }
        }
        Self::new(dims, data)
    }

    /// Builds from nested arrays indexed `[i][j][k]`.
    pub fn from_nested(nested: Vec<Vec<Vec<T>>>) -> Result<Self> {
        let r = nested.len();
        let c = nested.first().map_or(0, Vec::len);
        let h = nested.first().and_then(|x| x.first()).map_or(0, Vec::len);
        let dims = Dims3::new(r, c, h)?;
        for plane in &nested {
            if plane.len() != c || plane.iter().any(|line| line.len() != h) {
                return Err(Error::Shape {
                    what: "3-array",
                    expected: format!("a rectangular {dims} array"),
                    found: "ragged nesting".into(),
                });
            }
        }
        Self::new(dims, nested.into_iter().flatten().flatten().collect())
    }

    pub fn to_nested(&self) -> Vec<Vec<Vec<T>>> {
        let Dims3 { r, c, h } = self.dims;
        (0..r).map(|i| (0..c).map(|j| (0..h).map(|k| self.at(i, j, k).clone()).collect()).collect()).collect()
    }

    pub fn total(&self) -> T {
        let mut s = T::zero();
        for v in &self.data {
            s += v;
        }
        s
    }

    /// Face sums `(Σ_k, Σ_j, Σ_i)` as `r×c`, `r×h` and `c×h` matrices.
    pub fn face_sums(&self) -> [Matrix<T>; 3] {
        let Dims3 { r, c, h } = self.dims;
        let mut ij = Matrix::filled(r, c, T::zero());
        let mut ik = Matrix::filled(r, h, T::zero());
        let mut jk = Matrix::filled(c, h, T::zero());
        for i in 0..r {
            for j in 0..c {
                for k in 0..h {
                    let v = self.at(i, j, k);
                    *ij.get_mut(i, j) += v;
                    *ik.get_mut(i, k) += v;
                    *jk.get_mut(j, k) += v;
                }
            }
        }
        [ij, ik, jk]
    }

    /// Line sums `(Σ_{j,k}, Σ_{i,k}, Σ_{i,j})`.
    pub fn line_sums(&self) -> [Vec<T>; 3] {
        let Dims3 { r, c, h } = self.dims;
        let mut a = vec![T::zero(); r];
        let mut b = vec![T::zero(); c];
        let mut d = vec![T::zero(); h];
        for (idx, v) in self.data.iter().enumerate() {
            a[idx / (c * h)] += v;
            b[idx / h % c] += v;
            d[idx % h] += v;
        }
        [a, b, d]
    }
}

impl<T> Array3<T> {
    pub fn dims(&self) -> Dims3 {
        self.dims
    }

    /// 0-based access.
    #[inline]
    pub fn at(&self, i: usize, j: usize, k: usize) -> &T {
        &self.data[self.dims.offset(i, j, k)]
    }

    #[inline]
    pub(crate) fn at_mut(&mut self, i: usize, j: usize, k: usize) -> &mut T {
        let o = self.dims.offset(i, j, k);
        &mut self.data[o]
    }

    /// 1-based access.
    pub fn get(&self, e: EntryIndex) -> Result<&T> {
        e.check(self.dims)?;
        Ok(self.at(e.i - 1, e.j - 1, e.k - 1))
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }
}

impl Table3 {
    pub fn to_real(&self) -> RealTable3 {
        Array3 { dims: self.dims, data: self.data.iter().map(|&v| BigRational::from_u64(v)).collect() }
    }

    pub fn is_binary(&self) -> bool {
        self.data.iter().all(|&v| v <= 1)
    }
}

impl RealTable3 {
    /// The integral table with the same entries, if every entry is an integer.
    pub fn to_integral(&self) -> Option<Table3> {
        let data = self
            .data
            .iter()
            .map(|v| if v.is_integer() { u64::try_from(v.to_integer()).ok() } else { None })
            .collect::<Option<Vec<_>>>()?;
        Table3::new(self.dims, data).ok()
    }
}

impl<T: Serialize + Entry> Serialize for Array3<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_nested().serialize(s)
    }
}

impl<'de, T: DeserializeOwned + Entry> Deserialize<'de> for Array3<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let nested = Vec::<Vec<Vec<T>>>::deserialize(d)?;
        Array3::from_nested(nested).map_err(serde::de::Error::custom)
    }
}

/// The three 2-marginals of an `(r, c, h)` table: `v_{i,j,+}` (`r×c`),
/// `v_{i,+,k}` (`r×h`) and `v_{+,j,k}` (`c×h`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawTwoMarginals")]
pub struct TwoMarginals {
    #[serde(skip)]
    dims: Dims3,
    ij: Matrix<u64>,
    ik: Matrix<u64>,
    jk: Matrix<u64>,
}

fn check_shape(what: &'static str, m: &Matrix<u64>, rows: usize, cols: usize) -> Result<()> {
    if m.shape() != (rows, cols) {
        return Err(Error::Shape {
            what,
            expected: format!("{rows}x{cols}"),
            found: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    u64::check_entries(m.as_slice(), what)
}

impl TwoMarginals {
    pub fn new(dims: Dims3, ij: Matrix<u64>, ik: Matrix<u64>, jk: Matrix<u64>) -> Result<Self> {
        check_shape("ij", &ij, dims.r, dims.c)?;
        check_shape("ik", &ik, dims.r, dims.h)?;
        check_shape("jk", &jk, dims.c, dims.h)?;
        Ok(Self { dims, ij, ik, jk })
    }

    pub fn zeros(dims: Dims3) -> Self {
        Self {
            dims,
            ij: Matrix::filled(dims.r, dims.c, 0),
            ik: Matrix::filled(dims.r, dims.h, 0),
            jk: Matrix::filled(dims.c, dims.h, 0),
        }
    }

    pub fn dims(&self) -> Dims3 {
        self.dims
    }

    /// Vertical marginal `v_{i,j,+}`.
    pub fn ij(&self) -> &Matrix<u64> {
        &self.ij
    }

    /// `v_{i,+,k}`.
    pub fn ik(&self) -> &Matrix<u64> {
        &self.ik
    }

    /// `v_{+,j,k}`.
    pub fn jk(&self) -> &Matrix<u64> {
        &self.jk
    }

    /// Value of the face spanned by axes `p != q` at 0-based coordinates
    /// `xp` (along `p`) and `xq` (along `q`).
    pub fn face(&self, p: usize, q: usize, xp: usize, xq: usize) -> u64 {
        match (p, q) {
            (0, 1) => *self.ij.get(xp, xq),
            (1, 0) => *self.ij.get(xq, xp),
            (0, 2) => *self.ik.get(xp, xq),
            (2, 0) => *self.ik.get(xq, xp),
            (1, 2) => *self.jk.get(xp, xq),
            (2, 1) => *self.jk.get(xq, xp),
            _ => panic!("face axes must be distinct and below 3, got ({p}, {q})"),
        }
    }

    /// The face matrix spanned by axes `p < q`.
    pub fn face_matrix(&self, p: usize, q: usize) -> &Matrix<u64> {
        match (p, q) {
            (0, 1) => &self.ij,
            (0, 2) => &self.ik,
            (1, 2) => &self.jk,
            _ => panic!("face axes must satisfy p < q < 3, got ({p}, {q})"),
        }
    }
}

#[derive(Deserialize)]
struct RawTwoMarginals {
    ij: Matrix<u64>,
    ik: Matrix<u64>,
    jk: Matrix<u64>,
}

impl TryFrom<RawTwoMarginals> for TwoMarginals {
    type Error = Error;
    fn try_from(raw: RawTwoMarginals) -> Result<Self> {
        let dims = Dims3::new(raw.ij.rows(), raw.ij.cols(), raw.ik.cols())?;
        Self::new(dims, raw.ij, raw.ik, raw.jk)
    }
}

/// The three 1-marginals `u_{i,+,+}`, `u_{+,j,+}`, `u_{+,+,k}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawOneMarginals")]
pub struct OneMarginals {
    #[serde(skip)]
    dims: Dims3,
    i: Vec<u64>,
    j: Vec<u64>,
    k: Vec<u64>,
}

impl OneMarginals {
    pub fn new(dims: Dims3, i: Vec<u64>, j: Vec<u64>, k: Vec<u64>) -> Result<Self> {
        for (what, v, n) in [("i", &i, dims.r), ("j", &j, dims.c), ("k", &k, dims.h)] {
            if v.len() != n {
                return Err(Error::Shape { what, expected: n.to_string(), found: v.len().to_string() });
            }
            u64::check_entries(v, what)?;
        }
        Ok(Self { dims, i, j, k })
    }

    /// All-ones 1-marginals for an `(n, n, n)` table.
    pub fn unit(n: usize) -> Result<Self> {
        Self::new(Dims3::new(n, n, n)?, vec![1; n], vec![1; n], vec![1; n])
    }

    pub fn dims(&self) -> Dims3 {
        self.dims
    }

    pub fn rows(&self) -> &[u64] {
        &self.i
    }

    pub fn cols(&self) -> &[u64] {
        &self.j
    }

    pub fn layers(&self) -> &[u64] {
        &self.k
    }

    /// Common total of the three vectors, if they agree.
    pub fn common_total(&self) -> Result<u64> {
        let t: [u64; 3] = [&self.i, &self.j, &self.k].map(|v| v.iter().sum());
        if t[0] == t[1] && t[1] == t[2] {
            Ok(t[0])
        } else {
            Err(Error::InconsistentOneMarginals(t[0], t[1], t[2]))
        }
    }
}

#[derive(Deserialize)]
struct RawOneMarginals {
    i: Vec<u64>,
    j: Vec<u64>,
    k: Vec<u64>,
}

impl TryFrom<RawOneMarginals> for OneMarginals {
    type Error = Error;
    fn try_from(raw: RawOneMarginals) -> Result<Self> {
        let dims = Dims3::new(raw.i.len(), raw.j.len(), raw.k.len())?;
        Self::new(dims, raw.i, raw.j, raw.k)
    }
}

/// One of the `r + c + h` agreement equations between pairs of 2-marginals
/// (1-based index).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "index", rename_all = "lowercase")]
pub enum Equation {
    /// `Σ_j v_{i,j,+} = Σ_k v_{i,+,k}`
    Row(usize),
    /// `Σ_i v_{i,j,+} = Σ_k v_{+,j,k}`
    Column(usize),
    /// `Σ_i v_{i,+,k} = Σ_j v_{+,j,k}`
    Layer(usize),
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Equation::Row(i) => write!(f, "row {i}: sum_j ij = sum_k ik"),
            Equation::Column(j) => write!(f, "column {j}: sum_i ij = sum_k jk"),
            Equation::Layer(k) => write!(f, "layer {k}: sum_i ik = sum_j jk"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub equation: Equation,
    pub lhs: u64,
    pub rhs: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    pub consistent: bool,
    /// Grand total, present only when consistent.
    pub total: Option<u64>,
    pub violations: Vec<Violation>,
}

/// 2-marginals of a table.
pub fn marginals2_of(t: &Table3) -> TwoMarginals {
    let [ij, ik, jk] = t.face_sums();
    TwoMarginals { dims: t.dims(), ij, ik, jk }
}

/// 1-marginals of a table.
pub fn marginals1_of(t: &Table3) -> OneMarginals {
    let [i, j, k] = t.line_sums();
    OneMarginals { dims: t.dims(), i, j, k }
}

/// Checks every agreement equation and reports all that fail.
///
/// When all line equations hold the three grand totals coincide, so no
/// separate total equation is listed.
pub fn check_consistency(m: &TwoMarginals) -> ConsistencyReport {
    let mut violations = Vec::new();
    let pairs = [
        (m.ij.row_sums(), m.ik.row_sums(), Equation::Row as fn(usize) -> Equation),
        (m.ij.col_sums(), m.jk.row_sums(), Equation::Column),
        (m.ik.col_sums(), m.jk.col_sums(), Equation::Layer),
    ];
    for (lhs, rhs, eq) in pairs {
        for (n, (&a, &b)) in lhs.iter().zip(&rhs).enumerate() {
            if a != b {
                violations.push(Violation { equation: eq(n + 1), lhs: a, rhs: b });
            }
        }
    }
    let consistent = violations.is_empty();
    ConsistencyReport { consistent, total: consistent.then(|| m.ij.total()), violations }
}

/// The Fréchet upper bound: the least of the three 2-marginal values covering `e`.
pub fn frechet_upper(m: &TwoMarginals, e: EntryIndex) -> Result<u64> {
    e.check(m.dims)?;
    let [i, j, k] = e.zero_based();
    Ok(*m.ij.get(i, j).min(m.ik.get(i, k)).min(m.jk.get(j, k)))
}

pub fn satisfies(t: &Table3, m: &TwoMarginals) -> Result<bool> {
    if t.dims() != m.dims() {
        return Err(Error::DimMismatch(format!("table {} vs marginals {}", t.dims(), m.dims())));
    }
    Ok(marginals2_of(t) == *m)
}

/// True iff `t <= p` entrywise.
pub fn dominated<T: Entry>(t: &Array3<T>, p: &Table3) -> Result<bool> {
    if t.dims() != p.dims() {
        return Err(Error::DimMismatch(format!("table {} vs bounds {}", t.dims(), p.dims())));
    }
    Ok(t.iter().zip(p.iter()).all(|(a, &b)| *a <= T::from_u64(b)))
}

/// True iff the array `x` (integral or rational) has exactly the 2-marginals `m`.
pub fn has_marginals<T: Entry>(x: &Array3<T>, m: &TwoMarginals) -> Result<bool> {
    if x.dims() != m.dims() {
        return Err(Error::DimMismatch(format!("array {} vs marginals {}", x.dims(), m.dims())));
    }
    let faces = x.face_sums();
    let ok = faces
        .iter()
        .zip([&m.ij, &m.ik, &m.jk])
        .all(|(f, g)| f.as_slice().iter().zip(g.as_slice()).all(|(a, &b)| *a == T::from_u64(b)));
    Ok(ok)
}

/// True iff the rational array `x` has exactly the 2-marginals `m`.
pub fn real_satisfies(x: &RealTable3, m: &TwoMarginals) -> Result<bool> {
    has_marginals(x, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(r: usize, c: usize, h: usize) -> Dims3 {
        Dims3::new(r, c, h).unwrap()
    }

    pub(crate) fn example21_x() -> Table3 {
        Table3::from_fn(d(2, 2, 2), |i, j, k| u64::from(i == j && j == k)).unwrap()
    }

    fn mat(rows: Vec<Vec<u64>>) -> Matrix<u64> {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn dims_reject_zero() {
        assert!(Dims3::new(0, 1, 1).is_err());
        assert!(Dims3::new(1, 1, 1).is_ok());
    }

    #[test]
    fn marginals_of_zero_table() {
        let m = marginals2_of(&Table3::zeros(d(2, 3, 4)));
        assert_eq!(m, TwoMarginals::zeros(d(2, 3, 4)));
        let u = marginals1_of(&Table3::zeros(d(2, 3, 4)));
        assert_eq!(u.rows(), &[0, 0]);
        assert_eq!(u.cols(), &[0, 0, 0]);
        assert_eq!(u.layers(), &[0, 0, 0, 0]);
    }

    #[test]
    fn marginals_of_example21_x() {
        let m = marginals2_of(&example21_x());
        let id = mat(vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(m.ij(), &id);
        assert_eq!(m.ik(), &id);
        assert_eq!(m.jk(), &id);
        let u = marginals1_of(&example21_x());
        assert_eq!((u.rows(), u.cols(), u.layers()), (&[1, 1][..], &[1, 1][..], &[1, 1][..]));
    }

    #[test]
    fn marginals_of_all_ones() {
        let ones = Table3::from_fn(d(2, 2, 2), |_, _, _| 1).unwrap();
        let m = marginals2_of(&ones);
        assert!(m.ij().as_slice().iter().chain(m.ik().as_slice()).chain(m.jk().as_slice()).all(|&v| v == 2));

        let ones = Table3::from_fn(d(2, 3, 4), |_, _, _| 1).unwrap();
        let u = marginals1_of(&ones);
        assert_eq!(u.rows(), &[12, 12]);
        assert_eq!(u.cols(), &[8, 8, 8]);
        assert_eq!(u.layers(), &[6, 6, 6, 6]);
    }

    #[test]
    fn single_cell_mismatch_is_inconsistent() {
        // With one cell, a single mismatched value breaks two of the three equations.
        let m = TwoMarginals::new(d(1, 1, 1), mat(vec![vec![1]]), mat(vec![vec![2]]), mat(vec![vec![1]])).unwrap();
        let rep = check_consistency(&m);
        assert!(!rep.consistent);
        assert_eq!(rep.total, None);
        assert_eq!(
            rep.violations,
            vec![
                Violation { equation: Equation::Row(1), lhs: 1, rhs: 2 },
                Violation { equation: Equation::Layer(1), lhs: 2, rhs: 1 },
            ]
        );
    }

    #[test]
    fn shape_error_names_the_face() {
        let err = TwoMarginals::new(
            d(2, 2, 2),
            mat(vec![vec![0, 0, 0], vec![0, 0, 0]]),
            mat(vec![vec![0, 0], vec![0, 0]]),
            mat(vec![vec![0, 0], vec![0, 0]]),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Shape { what: "ij", .. }));
    }

    #[test]
    fn frechet_examples() {
        let m = TwoMarginals::new(d(1, 1, 1), mat(vec![vec![2]]), mat(vec![vec![3]]), mat(vec![vec![1]])).unwrap();
        assert_eq!(frechet_upper(&m, EntryIndex::new(1, 1, 1)).unwrap(), 1);
        let z = TwoMarginals::zeros(d(2, 2, 3));
        assert_eq!(frechet_upper(&z, EntryIndex::new(2, 1, 3)).unwrap(), 0);
        assert!(matches!(frechet_upper(&z, EntryIndex::new(3, 1, 1)), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn satisfies_and_dominated() {
        let x = example21_x();
        assert!(satisfies(&x, &marginals2_of(&x)).unwrap());
        assert!(!satisfies(&Table3::zeros(d(2, 2, 2)), &marginals2_of(&x)).unwrap());
        assert!(satisfies(&Table3::zeros(d(1, 1, 1)), &marginals2_of(&x)).is_err());
        let ones = Table3::from_fn(d(2, 2, 2), |_, _, _| 1).unwrap();
        assert!(dominated(&x, &x).unwrap());
        assert!(dominated(&x, &ones).unwrap());
        assert!(!dominated(&ones, &Table3::zeros(d(2, 2, 2))).unwrap());
    }

    #[test]
    fn overflowing_table_is_rejected() {
        let err = Table3::new(d(1, 1, 2), vec![u64::MAX, 1]).unwrap_err();
        assert_eq!(err, Error::Overflow("table entries"));
    }

    #[test]
    fn real_check_matches_integer_check() {
        let x = example21_x();
        let m = marginals2_of(&x);
        assert!(real_satisfies(&x.to_real(), &m).unwrap());
        assert!(!real_satisfies(&RealTable3::zeros(d(2, 2, 2)), &m).unwrap());
        assert_eq!(x.to_real().to_integral(), Some(x));
    }

    #[test]
    fn nested_round_trip() {
        let x = example21_x();
        assert_eq!(Table3::from_nested(x.to_nested()).unwrap(), x);
        assert!(Table3::from_nested(vec![vec![vec![1, 2], vec![3]]]).is_err());
    }

    pub(crate) fn small_table() -> impl Strategy<Value = Table3> {
        (1usize..=3, 1usize..=3, 1usize..=3).prop_flat_map(|(r, c, h)| {
            proptest::collection::vec(0u64..=4, r * c * h)
                .prop_map(move |v| Table3::new(Dims3::new(r, c, h).unwrap(), v).unwrap())
        })
    }

    proptest! {
        #[test]
        fn marginals_of_tables_are_consistent(t in small_table()) {
            let rep = check_consistency(&marginals2_of(&t));
            prop_assert!(rep.consistent);
            prop_assert_eq!(rep.total, Some(t.total()));
        }

        #[test]
        fn entries_respect_frechet(t in small_table()) {
            let m = marginals2_of(&t);
            let dims = t.dims();
            for i in 1..=dims.r { for j in 1..=dims.c { for k in 1..=dims.h {
                let e = EntryIndex::new(i, j, k);
                prop_assert!(*t.get(e).unwrap() <= frechet_upper(&m, e).unwrap());
            }}}
        }
    }
}
