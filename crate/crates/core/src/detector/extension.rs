//! The quiver of the relation extension and C-sequential walks in it.

use super::search::{Conditions, Search};
use super::{check_sequential, run_grid, DetectorConfig, DetectorError, Orientation};
use crate::algebra::TruncatedAlgebra;
use crate::quiver::{Letter, Quiver, Walk};

/// The original quiver with one new arrow per top relation, running from the
/// relation's target to its source. Original arrows keep their indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionQuiver {
    pub quiver: Quiver,
    /// Arrow index of the new arrow of each top relation.
    pub new_arrows: Vec<usize>,
}

impl ExtensionQuiver {
    pub fn is_new(&self, a: usize) -> bool {
        self.new_arrows.contains(&a)
    }
}

pub fn relation_extension_quiver(a: &TruncatedAlgebra) -> Result<ExtensionQuiver, DetectorError> {
    let tops = a.top_relations()?;
    let mut quiver = a.quiver().clone();
    let mut new_arrows = Vec::new();
    for (k, r) in tops.iter().enumerate() {
        let mut name = format!("r{}", k + 1);
        while quiver.arrow_by_name(&name).is_ok() {
            name.push('\'');
        }
        new_arrows.push(quiver.add_arrow(name, r.target(), r.source()).expect("name is fresh"));
    }
    Ok(ExtensionQuiver { quiver, new_arrows })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CSequentialWalk {
    pub rho_index: usize,
    pub sigma_index: usize,
    pub orientation: Orientation,
    pub w_prime: Option<Walk>,
    /// The walk in the extension quiver, new arrows at both ends.
    pub full_walk: Walk,
}

/// Walks `α w' β` in the extension quiver such that `u_i w' v_j` is a
/// sequential walk for every branch `u_i` of `ρ` and `v_j` of `σ`. With `u`,
/// `v` read forwards the new arrows are crossed against their direction.
pub fn detect_c_sequential_walks(a: &TruncatedAlgebra, cfg: &DetectorConfig) -> Result<Vec<CSequentialWalk>, DetectorError> {
    let ext = relation_extension_quiver(a)?;
    let tops = a.top_relations()?;
    let q = a.quiver();
    let n = tops.len();
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let results = run_grid(cells, cfg.threads, |i, j| {
        let cond = Conditions::sequential(a, &tops[i], &tops[j], cfg);
        let mut out = Vec::new();
        for orientation in [Orientation::Forward, Orientation::Inverse] {
            let us: Vec<Walk> = tops[i].paths().map(|p| orientation.walk(q, p)).collect();
            let vs: Vec<Walk> = tops[j].paths().map(|p| orientation.walk(q, p)).collect();
            for w in Search::between(&cond, &us, &vs, cfg.max_walk_len).run() {
                let all_pass = tops[i].paths().all(|ub| {
                    tops[j].paths().all(|vb| {
                        let cand = super::Candidate {
                            rho: tops[i].clone(),
                            u_branch: ub.clone(),
                            sigma: tops[j].clone(),
                            v_branch: vb.clone(),
                            w_prime: w.clone(),
                            orientation,
                        };
                        check_sequential(a, &cand, cfg).map(|f| f.is_empty()).unwrap_or(false)
                    })
                });
                if !all_pass {
                    continue;
                }
                let (alpha, beta) = match orientation {
                    Orientation::Forward => (Letter::inverse(ext.new_arrows[i]), Letter::inverse(ext.new_arrows[j])),
                    Orientation::Inverse => (Letter::direct(ext.new_arrows[i]), Letter::direct(ext.new_arrows[j])),
                };
                let mut letters = vec![alpha];
                letters.extend(w.iter().flat_map(|w| w.letters().iter().copied()));
                letters.push(beta);
                let full_walk = Walk::new(&ext.quiver, letters).expect("new arrows meet the ends of w'");
                out.push(CSequentialWalk { rho_index: i, sigma_index: j, orientation, w_prime: w, full_walk });
            }
        }
        out
    });
    let mut results = results;
    results.sort_by_key(|c| (c.rho_index, c.sigma_index, c.w_prime.as_ref().map_or(0, Walk::len), c.full_walk.letters().to_vec(), c.orientation));
    Ok(results)
}
