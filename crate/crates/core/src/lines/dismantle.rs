//! Splitting a line system into tight parts, and searching for orthonormal-basis partitions.

use super::{certify_lines, tightness_check, LineSystem, TightnessReport, ANGLE_TOL};
use crate::error::{Error, Result};
use crate::graph::GainGraph;
use crate::spectral::TwoEvCertificate;

/// Certificate for the union of the first `parts` parts.
#[derive(Debug, Clone)]
pub struct UnionCertificate {
    pub parts: usize,
    pub columns: Vec<usize>,
    pub graph: GainGraph,
    pub tightness: TightnessReport,
    /// `None` when the union graph has no edges.
    pub certificate: Option<TwoEvCertificate>,
}

#[derive(Debug, Clone)]
pub struct Dismantling {
    pub parts: Vec<TightnessReport>,
    pub unions: Vec<UnionCertificate>,
    /// `‖Σ N_iN_i* − NN*‖_F`.
    pub additivity_residual: f64,
}

/// Checks each part is tight and certifies every prefix union.
pub fn dismantle(lines: &LineSystem, partition: &[Vec<usize>], alpha: f64) -> Result<Dismantling> {
    let n = lines.count();
    let mut seen = vec![false; n];
    for part in partition {
        if part.is_empty() {
            return Err(Error::PartitionInvalid("empty part".into()));
        }
        for &c in part {
            if c >= n {
                return Err(Error::PartitionInvalid(format!("column {c} out of range (n = {n})")));
            }
            if std::mem::replace(&mut seen[c], true) {
                return Err(Error::PartitionInvalid(format!("column {c} appears twice")));
            }
        }
    }
    if let Some(c) = seen.iter().position(|s| !s) {
        return Err(Error::PartitionInvalid(format!("column {c} not covered")));
    }

    let mut parts = Vec::with_capacity(partition.len());
    let mut frame_sum = crate::linalg::CMatrix::zeros(lines.dim(), lines.dim());
    for (i, part) in partition.iter().enumerate() {
        let sub = lines.select(part);
        let report = tightness_check(&sub);
        if !report.is_tight {
            return Err(Error::PartNotTight { part: i });
        }
        frame_sum = frame_sum.add(&sub.frame_operator());
        parts.push(report);
    }
    let additivity_residual = frame_sum.sub(&lines.frame_operator()).frobenius();

    let mut unions = Vec::with_capacity(partition.len());
    let mut columns = Vec::new();
    for (t, part) in partition.iter().enumerate() {
        columns.extend_from_slice(part);
        let sub = lines.select(&columns);
        let (graph, certificate) = certify_lines(&sub, alpha)?;
        unions.push(UnionCertificate {
            parts: t + 1,
            columns: columns.clone(),
            graph,
            tightness: tightness_check(&sub),
            certificate,
        });
    }
    Ok(Dismantling { parts, unions, additivity_residual })
}

type Mask = u128;

struct BasisSearch {
    n: usize,
    bases: Vec<Mask>,
    /// Indices into `bases` of the bases containing each column.
    by_column: Vec<Vec<usize>>,
    steps: u64,
    budget: u64,
}

impl BasisSearch {
    fn new(lines: &LineSystem, budget: u64) -> Result<BasisSearch> {
        let (n, m) = (lines.count(), lines.dim());
        if n > Mask::BITS as usize {
            return Err(Error::TooLarge { n, limit: Mask::BITS as usize });
        }
        let g = lines.gram();
        let mut orth = vec![0 as Mask; n];
        for u in 0..n {
            for v in 0..n {
                if u != v && g[(u, v)].norm() <= ANGLE_TOL {
                    orth[u] |= 1 << v;
                }
            }
        }
        let mut search = BasisSearch { n, bases: Vec::new(), by_column: vec![Vec::new(); n], steps: 0, budget };
        for u in 0..n {
            let later = orth[u] & !((1 << (u + 1)) - 1);
            search.extend_clique(&orth, 1 << u, later, m)?;
        }
        for (i, &b) in search.bases.iter().enumerate() {
            for c in 0..n {
                if b >> c & 1 == 1 {
                    search.by_column[c].push(i);
                }
            }
        }
        Ok(search)
    }

    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(Error::Timeout { budget: self.budget });
        }
        Ok(())
    }

    /// Enumerates orthogonal `m`-sets extending `clique` by columns in `cand`, each once (increasing order).
    fn extend_clique(&mut self, orth: &[Mask], clique: Mask, cand: Mask, m: usize) -> Result<()> {
        self.tick()?;
        if clique.count_ones() as usize == m {
            self.bases.push(clique);
            return Ok(());
        }
        let mut rest = cand;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            self.extend_clique(orth, clique | 1 << v, rest & orth[v], m)?;
        }
        Ok(())
    }

    fn exact_cover(&mut self, covered: Mask, chosen: &mut Vec<usize>) -> Result<bool> {
        self.tick()?;
        let full: Mask = if self.n == 128 { Mask::MAX } else { (1 << self.n) - 1 };
        if covered == full {
            return Ok(true);
        }
        let first = (!covered & full).trailing_zeros() as usize;
        for i in self.by_column[first].clone() {
            if self.bases[i] & covered == 0 {
                chosen.push(i);
                if self.exact_cover(covered | self.bases[i], chosen)? {
                    return Ok(true);
                }
                chosen.pop();
            }
        }
        Ok(false)
    }

    fn packing(&mut self, start: usize, covered: Mask, chosen: &mut Vec<usize>, best: &mut Vec<usize>, m: usize) -> Result<()> {
        self.tick()?;
        if chosen.len() > best.len() {
            *best = chosen.clone();
        }
        let free = self.n - covered.count_ones() as usize;
        if chosen.len() + free / m <= best.len() {
            return Ok(());
        }
        for i in start..self.bases.len() {
            if self.bases[i] & covered == 0 {
                chosen.push(i);
                self.packing(i + 1, covered | self.bases[i], chosen, best, m)?;
                chosen.pop();
                if best.len() * m == self.n {
                    break;
                }
            }
        }
        Ok(())
    }

    fn columns(&self, i: usize) -> Vec<usize> {
        (0..self.n).filter(|&c| self.bases[i] >> c & 1 == 1).collect()
    }
}

/// Partition of the columns into orthonormal bases, or `None` when none exists.
pub fn find_basis_partition(lines: &LineSystem, budget: u64) -> Result<Option<Vec<Vec<usize>>>> {
    let (n, m) = (lines.count(), lines.dim());
    if m == 0 || n % m != 0 {
        return Ok(None);
    }
    let mut search = BasisSearch::new(lines, budget)?;
    let mut chosen = Vec::new();
    if search.exact_cover(0, &mut chosen)? {
        Ok(Some(chosen.iter().map(|&i| search.columns(i)).collect()))
    } else {
        Ok(None)
    }
}

/// A largest set of pairwise disjoint orthonormal bases among the columns.
pub fn find_partial_bases(lines: &LineSystem, budget: u64) -> Result<Vec<Vec<usize>>> {
    let m = lines.dim();
    let mut search = BasisSearch::new(lines, budget)?;
    let (mut chosen, mut best) = (Vec::new(), Vec::new());
    search.packing(0, 0, &mut chosen, &mut best, m)?;
    Ok(best.iter().map(|&i| search.columns(i)).collect())
}
