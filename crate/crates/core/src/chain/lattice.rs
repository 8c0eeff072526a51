use faer::Mat;
use num_complex::Complex64 as C64;

use super::ChainParams;
use crate::error::{Error, Result};
use crate::ops::{adjoint, annihilation, check_hermitian, kron_lr, number, real};

/// System Hamiltonian in the single-excitation site basis and the operator
/// through which each site couples to its own bath.
#[derive(Clone, Debug)]
pub struct SystemSpec {
    pub h: Mat<C64>,
    pub coupling_ops: Vec<Mat<C64>>,
}

impl SystemSpec {
    pub fn new(h: Mat<C64>, coupling_ops: Vec<Mat<C64>>) -> Result<Self> {
        check_hermitian(&h, "system Hamiltonian")?;
        for (i, v) in coupling_ops.iter().enumerate() {
            if v.nrows() != h.nrows() {
                return Err(Error::DimensionMismatch { expected: h.nrows(), got: v.nrows() });
            }
            check_hermitian(v, &format!("coupling operator {i}"))?;
        }
        if coupling_ops.len() != h.nrows() {
            return Err(Error::DimensionMismatch { expected: h.nrows(), got: coupling_ops.len() });
        }
        Ok(SystemSpec { h, coupling_ops })
    }

    /// `H = [[e1, J], [J, e2]]` with `V_i = |i⟩⟨i|`.
    pub fn dimer(e1: f64, e2: f64, coupling: f64) -> Self {
        let h = real(vec![vec![e1, coupling], vec![coupling, e2]]);
        let v1 = real(vec![vec![1.0, 0.0], vec![0.0, 0.0]]);
        let v2 = real(vec![vec![0.0, 0.0], vec![0.0, 1.0]]);
        SystemSpec { h, coupling_ops: vec![v1, v2] }
    }

    pub fn n_sites(&self) -> usize {
        self.h.nrows()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SiteKind {
    BosonChain1,
    System,
    BosonChain2,
}

#[derive(Clone, Debug)]
pub struct LatticeSite {
    pub kind: SiteKind,
    /// index within its chain (0 = head); 0 for the system
    pub chain_index: usize,
    pub local_dim: usize,
    pub onsite: Mat<C64>,
}

/// Nearest-neighbour term between entries `left` and `left + 1`.
#[derive(Clone, Debug)]
pub struct Bond {
    pub left: usize,
    pub op: Mat<C64>,
}

/// `[chain₁ N₁−1 … 0][system][chain₂ 0 … N₂−1]`.
#[derive(Clone, Debug)]
pub struct LatticeHamiltonian {
    pub sites: Vec<LatticeSite>,
    pub bonds: Vec<Bond>,
}

impl LatticeHamiltonian {
    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.sites.iter().map(|s| s.local_dim).collect()
    }

    pub fn system_index(&self) -> usize {
        self.sites.iter().position(|s| s.kind == SiteKind::System).expect("lattice has a system entry")
    }

    pub fn bond(&self, left: usize) -> Option<&Bond> {
        self.bonds.iter().find(|b| b.left == left)
    }
}

pub fn assemble_lattice(sys: &SystemSpec, chains: &[ChainParams], local_dim: usize) -> Result<LatticeHamiltonian> {
    if sys.n_sites() != 2 {
        return Err(Error::UnsupportedTopology(format!(
            "only a two-site system is supported, got {} sites",
            sys.n_sites()
        )));
    }
    if chains.len() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: chains.len() });
    }
    if local_dim < 2 {
        return Err(Error::InvalidParameter(format!("local_dim must be at least 2, got {local_dim}")));
    }
    let b = annihilation(local_dim);
    let bd = adjoint(&b);
    let x = &b + &bd;
    let n_op = number(local_dim);
    let hop = kron_lr(&bd, &b) + kron_lr(&b, &bd);
    let boson = |kind, idx: usize, eps: f64| LatticeSite {
        kind,
        chain_index: idx,
        local_dim,
        onsite: Mat::from_fn(local_dim, local_dim, |i, j| n_op[(i, j)] * eps),
    };
    let scaled = |m: &Mat<C64>, s: f64| Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * s);

    let (c1, c2) = (&chains[0], &chains[1]);
    let (n1, n2) = (c1.length(), c2.length());
    let mut sites = Vec::with_capacity(n1 + n2 + 1);
    let mut bonds = Vec::with_capacity(n1 + n2);
    for i in 0..n1 {
        let n = n1 - 1 - i;
        sites.push(boson(SiteKind::BosonChain1, n, c1.eps[n]));
        if n > 0 {
            bonds.push(Bond { left: i, op: scaled(&hop, c1.t[n - 1]) });
        }
    }
    sites.push(LatticeSite { kind: SiteKind::System, chain_index: 0, local_dim: sys.h.nrows(), onsite: sys.h.clone() });
    bonds.push(Bond { left: n1 - 1, op: scaled(&kron_lr(&x, &sys.coupling_ops[0]), c1.system_coupling()) });
    bonds.push(Bond { left: n1, op: scaled(&kron_lr(&sys.coupling_ops[1], &x), c2.system_coupling()) });
    for n in 0..n2 {
        sites.push(boson(SiteKind::BosonChain2, n, c2.eps[n]));
        if n + 1 < n2 {
            bonds.push(Bond { left: n1 + 1 + n, op: scaled(&hop, c2.t[n]) });
        }
    }
    bonds.sort_by_key(|b| b.left);
    Ok(LatticeHamiltonian { sites, bonds })
}
