use faer::MatRef;
use num_complex::Complex64 as C64;

/// Site tensor `A[a, s, b]` stored column-major with index `a + dl·(s + d·b)`,
/// so `(dl·d) × dr` and `dl × (d·dr)` matrix views are free.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor3 {
    pub dl: usize,
    pub d: usize,
    pub dr: usize,
    pub data: Vec<C64>,
}

impl Tensor3 {
    pub fn zeros(dl: usize, d: usize, dr: usize) -> Self {
        Tensor3 { dl, d, dr, data: vec![C64::new(0.0, 0.0); dl * d * dr] }
    }

    #[inline]
    pub fn get(&self, a: usize, s: usize, b: usize) -> C64 {
        self.data[a + self.dl * (s + self.d * b)]
    }

    #[inline]
    pub fn set(&mut self, a: usize, s: usize, b: usize, v: C64) {
        self.data[a + self.dl * (s + self.d * b)] = v;
    }

    /// Rows `a + dl·s`, columns `b`.
    pub fn left_mat(&self) -> MatRef<'_, C64> {
        MatRef::from_column_major_slice(&self.data, self.dl * self.d, self.dr)
    }

    /// Rows `a`, columns `s + d·b`.
    pub fn right_mat(&self) -> MatRef<'_, C64> {
        MatRef::from_column_major_slice(&self.data, self.dl, self.d * self.dr)
    }

    pub fn from_left_mat(m: MatRef<'_, C64>, dl: usize, d: usize) -> Self {
        debug_assert_eq!(m.nrows(), dl * d);
        Tensor3 { dl, d, dr: m.ncols(), data: to_col_major(m) }
    }

    pub fn from_right_mat(m: MatRef<'_, C64>, d: usize, dr: usize) -> Self {
        debug_assert_eq!(m.ncols(), d * dr);
        Tensor3 { dl: m.nrows(), d, dr, data: to_col_major(m) }
    }

    pub fn norm2(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }
}

pub(crate) fn to_col_major(m: MatRef<'_, C64>) -> Vec<C64> {
    let mut out = Vec::with_capacity(m.nrows() * m.ncols());
    for j in 0..m.ncols() {
        out.extend(m.col(j).iter().copied());
    }
    out
}
