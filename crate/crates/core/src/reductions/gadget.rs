//! MAX CUT encoded as a threshold question on the `inf->1` norm of a sign matrix.
//!
//! For a graph with edges `q = (i, j)`, `i < j`, the matrix has `|E| x |V|`
//! blocks of size `p x p`: block `(q, i)` is all `+1`, block `(q, j)` is all
//! `-1` and every other block is the Sylvester Hadamard matrix `H(p)`. A cut of
//! size `c` embeds as a sign pair with `u^T A v >= 2 p^2 c - |E||V| p^{3/2}`;
//! once `p > |E|^2 |V|^2` no sign pair reaches that threshold unless a cut of
//! size `c` exists.

use rayon::prelude::*;

use super::{hadamard, Graph};
use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, SignFactors, SignMatrix};
use crate::objective::bilinear;
use crate::oracle::{cut_size, inf1_norm_exact, maxcut_exact, MaxCut, OracleConfig, MAXCUT_CAP};

/// Largest gadget (in matrix entries) built by default.
pub const DEFAULT_GADGET_ENTRY_CAP: usize = 1 << 24;

/// Block size selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PChoice {
    /// Smallest power of two above `|E|^2 |V|^2`.
    Auto,
    /// Any power of two; instances with `p <= |E|^2 |V|^2` are flagged unsound.
    Explicit(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    PlusOnes,
    MinusOnes,
    Hadamard,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GadgetInstance {
    matrix: SignMatrix,
    p: usize,
    graph: Graph,
    sound: bool,
}

impl GadgetInstance {
    pub fn matrix(&self) -> &SignMatrix {
        &self.matrix
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn num_vertices(&self) -> usize {
        self.graph.num_vertices()
    }

    pub fn num_edges(&self) -> usize {
        self.graph.num_edges()
    }

    /// True when `p > |E|^2 |V|^2`.
    pub fn sound(&self) -> bool {
        self.sound
    }

    /// `2 p^2`, the per-crossing-edge coefficient of the threshold.
    pub fn d_star_slope(&self) -> f64 {
        2.0 * (self.p * self.p) as f64
    }

    /// `|E||V| p^{3/2}`, the total Hadamard slack.
    pub fn d_star_offset(&self) -> f64 {
        let p = self.p as f64;
        (self.num_edges() * self.num_vertices()) as f64 * p * p.sqrt()
    }

    /// Threshold `d*(c) = 2 p^2 c - |E||V| p^{3/2}`.
    pub fn d_star(&self, c: usize) -> f64 {
        self.d_star_slope() * c as f64 - self.d_star_offset()
    }

    /// `value >= d*(c)`, allowing one ulp of slack for the irrational offset.
    pub fn reaches(&self, value: f64, c: usize) -> bool {
        let d = self.d_star(c);
        value >= d - d.abs() * f64::EPSILON
    }

    pub fn block_kind(&self, q: usize, l: usize) -> BlockKind {
        block_kind(&self.graph, q, l)
    }

    /// Checks every block against its expected pattern.
    pub fn audit_blocks(&self) -> bool {
        let h = hadamard(self.p).expect("p is a power of two");
        let p = self.p;
        (0..self.num_edges()).all(|q| {
            (0..self.num_vertices()).all(|l| {
                let kind = self.block_kind(q, l);
                (0..p).all(|r| {
                    (0..p).all(|c| {
                        let x = self.matrix.get(q * p + r, l * p + c);
                        match kind {
                            BlockKind::PlusOnes => x == 1.0,
                            BlockKind::MinusOnes => x == -1.0,
                            BlockKind::Hadamard => x == h.get(r, c),
                        }
                    })
                })
            })
        })
    }
}

fn block_kind(g: &Graph, q: usize, l: usize) -> BlockKind {
    let (i, j) = g.edges()[q];
    if l == i {
        BlockKind::PlusOnes
    } else if l == j {
        BlockKind::MinusOnes
    } else {
        BlockKind::Hadamard
    }
}

fn sound_threshold(g: &Graph) -> usize {
    let ev = g.num_edges() * g.num_vertices();
    ev * ev
}

/// Builds the gadget for `g`; refuses matrices above `entry_cap` entries.
pub fn maxcut_gadget(g: &Graph, p: PChoice, entry_cap: usize) -> Result<GadgetInstance> {
    if g.num_edges() == 0 {
        return Err(Error::InvalidGraph("gadget needs at least one edge".into()));
    }
    let threshold = sound_threshold(g);
    let p = match p {
        PChoice::Auto => (threshold + 1).next_power_of_two(),
        PChoice::Explicit(p) => {
            if p == 0 || !p.is_power_of_two() {
                return Err(Error::NotPowerOfTwo(p));
            }
            p
        }
    };
    let rows = p * g.num_edges();
    let cols = p * g.num_vertices();
    let entries = rows.saturating_mul(cols);
    if entries > entry_cap {
        return Err(Error::GadgetTooLarge {
            p,
            rows,
            cols,
            entries,
            cap: entry_cap,
        });
    }

    let h = hadamard(p)?;
    let mut data = vec![0.0; entries];
    data.par_chunks_mut(cols).enumerate().for_each(|(r, row)| {
        let q = r / p;
        for (c, x) in row.iter_mut().enumerate() {
            *x = match block_kind(g, q, c / p) {
                BlockKind::PlusOnes => 1.0,
                BlockKind::MinusOnes => -1.0,
                BlockKind::Hadamard => h.get(r % p, c % p),
            };
        }
    });
    Ok(GadgetInstance {
        matrix: SignMatrix::new(DenseMatrix::new(rows, cols, data)?)?,
        p,
        graph: g.clone(),
        sound: p > threshold,
    })
}

/// Sign pair attached to the cut `side` (`side[i]` true when `i` is in `S`).
///
/// Vertex blocks of `v` are `+1` on `S`, `-1` elsewhere. The edge block of `u`
/// for a crossing edge `(i, j)` is `+1` when `i` is in `S` and `-1` when `j` is;
/// non-crossing edge blocks are `+1`.
pub fn embed_cut(inst: &GadgetInstance, side: &[bool]) -> Result<SignFactors> {
    if side.len() != inst.num_vertices() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} vertices", inst.num_vertices()),
            found: format!("{}", side.len()),
        });
    }
    let p = inst.p;
    let v: Vec<f64> = side
        .iter()
        .flat_map(|&s| std::iter::repeat_n(if s { 1.0 } else { -1.0 }, p))
        .collect();
    let u: Vec<f64> = inst
        .graph
        .edges()
        .iter()
        .flat_map(|&(i, j)| {
            let x = if side[i] == side[j] || side[i] {
                1.0
            } else {
                -1.0
            };
            std::iter::repeat_n(x, p)
        })
        .collect();
    SignFactors::new(u, v)
}

/// Contribution of the `2|E|` endpoint blocks to `u^T A v`, summed entry by entry.
pub fn edge_block_contribution(inst: &GadgetInstance, u: &[f64], v: &[f64]) -> Result<f64> {
    inst.matrix.check_shape(u.len(), v.len())?;
    let p = inst.p;
    let mut total = 0.0;
    for (q, &(i, j)) in inst.graph.edges().iter().enumerate() {
        for l in [i, j] {
            for r in 0..p {
                for c in 0..p {
                    total += u[q * p + r] * inst.matrix.get(q * p + r, l * p + c) * v[l * p + c];
                }
            }
        }
    }
    Ok(total)
}

/// The same contribution from block counts: `sum_q 2 (t_i - t_j)(2 s_q - p)`
/// where `s_q` and `t_i` count the `+1`s in block `q` of `u` and block `i` of `v`.
pub fn edge_block_formula(inst: &GadgetInstance, u: &[f64], v: &[f64]) -> Result<f64> {
    inst.matrix.check_shape(u.len(), v.len())?;
    let p = inst.p;
    let ones =
        |x: &[f64], b: usize| x[b * p..(b + 1) * p].iter().filter(|&&y| y > 0.0).count() as f64;
    Ok(inst
        .graph
        .edges()
        .iter()
        .enumerate()
        .map(|(q, &(i, j))| 2.0 * (ones(v, i) - ones(v, j)) * (2.0 * ones(u, q) - p as f64))
        .sum())
}

/// How far the converse (no large cut => no sign pair above threshold) was checked.
#[derive(Debug, Clone, PartialEq)]
pub enum Certification {
    /// Only embedded cut vectors were examined.
    EmbeddingOnly,
    /// The exact `inf->1` norm was computed over all sign pairs.
    Full { inf1: f64, reaches: bool },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GadgetReport {
    pub sound: bool,
    pub p: usize,
    pub c_star: usize,
    pub d_star: f64,
    pub max_cut: MaxCut,
    pub best_embedded_value: f64,
    pub best_embedded_side: Vec<bool>,
    pub best_embedded_cut: usize,
    /// The graph has a cut with at least `c_star` edges.
    pub yes_instance: bool,
    /// Some embedded cut reaches `d_star`.
    pub embedded_reaches: bool,
    /// Every embedded cut of size `c` satisfies `u^T A v >= d*(c)`.
    pub lower_bound_holds: bool,
    pub certification: Certification,
}

impl GadgetReport {
    /// A yes-instance must produce an embedded value above the threshold.
    pub fn forward_holds(&self) -> bool {
        !self.yes_instance || self.embedded_reaches
    }

    pub fn embedded_consistent(&self) -> bool {
        self.yes_instance == self.embedded_reaches
    }

    pub fn full_consistent(&self) -> Option<bool> {
        match self.certification {
            Certification::EmbeddingOnly => None,
            Certification::Full { reaches, .. } => Some(reaches == self.yes_instance),
        }
    }

    /// Forward direction and lower bound always; the equivalence only when sound.
    pub fn passed(&self) -> bool {
        self.forward_holds()
            && self.lower_bound_holds
            && (!self.sound
                || (self.embedded_consistent() && self.full_consistent().unwrap_or(true)))
    }
}

/// Compares the MAX CUT answer for `c_star` with the best embedded value.
///
/// The full converse is certified only when the gadget is small enough for
/// [`inf1_norm_exact`] under `cfg`.
pub fn verify_gadget_threshold(
    inst: &GadgetInstance,
    c_star: usize,
    cfg: &OracleConfig,
) -> Result<GadgetReport> {
    let nv = inst.num_vertices();
    if nv > MAXCUT_CAP {
        return Err(Error::CapExceeded {
            what: "verify_gadget_threshold",
            size: nv,
            cap: MAXCUT_CAP,
        });
    }
    let max_cut = maxcut_exact(&inst.graph)?;
    let decode =
        |code: u64| -> Vec<bool> { (0..nv).map(|i| (code >> (nv - 1 - i)) & 1 == 1).collect() };

    let (best_value, best_code, lower_ok) = (0..1u64 << nv)
        .into_par_iter()
        .map(|code| {
            let side = decode(code);
            let f = embed_cut(inst, &side).expect("side has the right length");
            let value = bilinear(&inst.matrix, f.u(), f.v()).expect("shapes agree");
            let ok = inst.reaches(value, cut_size(&inst.graph, &side));
            (value, code, ok)
        })
        .reduce(
            || (f64::NEG_INFINITY, u64::MAX, true),
            |a, b| {
                let ok = a.2 && b.2;
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    (b.0, b.1, ok)
                } else {
                    (a.0, a.1, ok)
                }
            },
        );

    let side = decode(best_code);
    let certification = if inst.matrix.rows().min(inst.matrix.cols()) <= cfg.cap {
        let inf1 = inf1_norm_exact(&inst.matrix, cfg)?.value;
        Certification::Full {
            inf1,
            reaches: inst.reaches(inf1, c_star),
        }
    } else {
        Certification::EmbeddingOnly
    };
    Ok(GadgetReport {
        sound: inst.sound,
        p: inst.p,
        c_star,
        d_star: inst.d_star(c_star),
        yes_instance: max_cut.size >= c_star,
        embedded_reaches: inst.reaches(best_value, c_star),
        best_embedded_cut: cut_size(&inst.graph, &side),
        max_cut,
        best_embedded_value: best_value,
        best_embedded_side: side,
        lower_bound_holds: lower_ok,
        certification,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn edge() -> Graph {
        Graph::new(2, vec![(0, 1)]).unwrap()
    }

    fn triangle() -> Graph {
        Graph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn single_edge_layout() {
        let inst = maxcut_gadget(&edge(), PChoice::Explicit(2), DEFAULT_GADGET_ENTRY_CAP).unwrap();
        assert_eq!(inst.matrix().shape(), (2, 4));
        assert_eq!(
            inst.matrix().as_slice(),
            &[1., 1., -1., -1., 1., 1., -1., -1.]
        );
        assert!(!inst.sound());
        assert!(inst.audit_blocks());
    }

    #[test]
    fn triangle_layout() {
        let inst =
            maxcut_gadget(&triangle(), PChoice::Explicit(4), DEFAULT_GADGET_ENTRY_CAP).unwrap();
        assert_eq!(inst.matrix().shape(), (12, 12));
        let h = hadamard(4).unwrap();
        for r in 0..4 {
            for c in 0..4 {
                assert_eq!(inst.matrix().get(r, 8 + c), h.get(r, c));
            }
        }
        assert_eq!(inst.block_kind(0, 2), BlockKind::Hadamard);
        assert_eq!(inst.block_kind(2, 0), BlockKind::PlusOnes);
        assert_eq!(inst.block_kind(2, 2), BlockKind::MinusOnes);
        assert!(inst.audit_blocks());
    }

    #[test]
    fn auto_p() {
        let inst = maxcut_gadget(&triangle(), PChoice::Auto, DEFAULT_GADGET_ENTRY_CAP).unwrap();
        assert_eq!(inst.p(), 128);
        assert!(inst.sound());
        let inst = maxcut_gadget(&edge(), PChoice::Auto, DEFAULT_GADGET_ENTRY_CAP).unwrap();
        assert_eq!(inst.p(), 8);
    }

    #[test]
    fn refusals() {
        assert!(matches!(
            maxcut_gadget(&triangle(), PChoice::Explicit(6), DEFAULT_GADGET_ENTRY_CAP),
            Err(Error::NotPowerOfTwo(6))
        ));
        assert!(matches!(
            maxcut_gadget(&triangle(), PChoice::Auto, 1000),
            Err(Error::GadgetTooLarge {
                p: 128,
                rows: 384,
                cols: 384,
                ..
            })
        ));
        let empty = Graph::new(3, vec![]).unwrap();
        assert!(maxcut_gadget(&empty, PChoice::Explicit(2), DEFAULT_GADGET_ENTRY_CAP).is_err());
    }

    #[test]
    fn single_edge_embedding() {
        for p in [2, 4, 8] {
            let inst =
                maxcut_gadget(&edge(), PChoice::Explicit(p), DEFAULT_GADGET_ENTRY_CAP).unwrap();
            let f = embed_cut(&inst, &[true, false]).unwrap();
            assert!(f.u().iter().all(|&x| x == 1.0));
            let value = bilinear(inst.matrix(), f.u(), f.v()).unwrap();
            assert_eq!(value, 2.0 * (p * p) as f64);
        }
        let inst = maxcut_gadget(&edge(), PChoice::Explicit(4), DEFAULT_GADGET_ENTRY_CAP).unwrap();
        assert!(embed_cut(&inst, &[true]).is_err());
    }

    #[test]
    fn empty_side_zero_edge_contribution() {
        let inst =
            maxcut_gadget(&triangle(), PChoice::Explicit(4), DEFAULT_GADGET_ENTRY_CAP).unwrap();
        let f = embed_cut(&inst, &[false, false, false]).unwrap();
        assert_eq!(edge_block_contribution(&inst, f.u(), f.v()).unwrap(), 0.0);
    }

    #[test]
    fn t1_identity_on_random_sign_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = Graph::new(4, vec![(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)]).unwrap();
        let inst = maxcut_gadget(&g, PChoice::Explicit(4), DEFAULT_GADGET_ENTRY_CAP).unwrap();
        let (m, n) = inst.matrix().shape();
        for _ in 0..100 {
            let u: Vec<f64> = (0..m)
                .map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 })
                .collect();
            let v: Vec<f64> = (0..n)
                .map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 })
                .collect();
            assert_eq!(
                edge_block_contribution(&inst, &u, &v).unwrap(),
                edge_block_formula(&inst, &u, &v).unwrap()
            );
        }
    }

    #[test]
    fn triangle_sound_embedding_bound() {
        let inst = maxcut_gadget(
            &triangle(),
            PChoice::Explicit(128),
            DEFAULT_GADGET_ENTRY_CAP,
        )
        .unwrap();
        assert!(inst.sound());
        let f = embed_cut(&inst, &[true, false, false]).unwrap();
        let value = bilinear(inst.matrix(), f.u(), f.v()).unwrap();
        let p = 128f64;
        assert!(value >= 2.0 * p * p * 2.0 - 9.0 * p.powf(1.5));
        assert!(inst.reaches(value, 2));
    }

    #[test]
    fn threshold_reports() {
        let cfg = OracleConfig::default();
        let inst = maxcut_gadget(&edge(), PChoice::Explicit(4), DEFAULT_GADGET_ENTRY_CAP).unwrap();
        assert_eq!(inst.d_star(1), 32.0 - 2.0 * 8.0);
        let r = verify_gadget_threshold(&inst, 1, &cfg).unwrap();
        assert_eq!(r.best_embedded_value, 32.0);
        assert!(r.yes_instance && r.embedded_reaches && r.passed());
        assert_eq!(r.full_consistent(), Some(true));

        let inst = maxcut_gadget(&edge(), PChoice::Explicit(2), DEFAULT_GADGET_ENTRY_CAP).unwrap();
        assert!(verify_gadget_threshold(&inst, 1, &cfg).unwrap().passed());

        let inst = maxcut_gadget(
            &triangle(),
            PChoice::Explicit(128),
            DEFAULT_GADGET_ENTRY_CAP,
        )
        .unwrap();
        let r = verify_gadget_threshold(&inst, 3, &cfg).unwrap();
        assert_eq!(r.max_cut.size, 2);
        assert!(!r.yes_instance);
        assert!(!r.embedded_reaches);
        assert!(r.best_embedded_value < inst.d_star(3));
        assert_eq!(r.certification, Certification::EmbeddingOnly);
        assert!(r.passed());
    }
}
