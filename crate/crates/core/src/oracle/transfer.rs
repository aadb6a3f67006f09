use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::{apply_generator, left_null_vector, LinkState, LoopClosed};
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::record::{DensityRecord, Method};

/// Largest circumference handled by the exact oracle.
pub const MAX_ORACLE_L: usize = 8;

/// How one layer of L plaquettes is stacked on the boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    /// A horizontal row of L vertices, each choosing one of the two tiles.
    RowToRow,
    /// ∏_{i even}(1 + e_i) · ∏_{i odd}(1 + e_i): the lattice rotated by 45°.
    Staggered,
}

/// Number of transitions indexed by (contractible, non-contractible) loops
/// closed along the way.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FugacityEntry {
    counts: BTreeMap<(u32, u32), u64>,
}

impl FugacityEntry {
    fn add(&mut self, closed: (u32, u32), count: u64) {
        *self.counts.entry(closed).or_default() += count;
    }

    fn merge(mut self, other: FugacityEntry) -> Self {
        for (k, c) in other.counts {
            self.add(k, c);
        }
        self
    }

    pub fn counts(&self) -> &BTreeMap<(u32, u32), u64> {
        &self.counts
    }

    /// Σ count·w^j·v^k.
    pub fn weight(&self, w: &Rational, v: &Rational) -> Rational {
        self.counts
            .iter()
            .map(|(&(j, k), &c)| {
                Rational::from(c as i64) * w.pow(j as i32).expect("w ≠ 0") * v.pow(k as i32).expect("v ≠ 0")
            })
            .sum()
    }

    /// Value at w = v = 1.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// ∂/∂w at w = v = 1.
    pub fn d_contractible(&self) -> u64 {
        self.counts.iter().map(|(&(j, _), &c)| j as u64 * c).sum()
    }

    /// ∂/∂v at w = v = 1.
    pub fn d_non_contractible(&self) -> u64 {
        self.counts.iter().map(|(&(_, k), &c)| k as u64 * c).sum()
    }

    /// d/dx at x = 1 with w = v = x.
    pub fn d_common(&self) -> u64 {
        self.counts.iter().map(|(&(j, k), &c)| (j + k) as u64 * c).sum()
    }
}

#[derive(Serialize)]
struct TermView {
    contractible: u32,
    non_contractible: u32,
    count: u64,
}

impl Serialize for FugacityEntry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermView> = self
            .counts
            .iter()
            .map(|(&(j, k), &count)| TermView { contractible: j, non_contractible: k, count })
            .collect();
        terms.serialize(s)
    }
}

fn tally(closed: &mut (u32, u32), what: LoopClosed) {
    match what {
        LoopClosed::Contractible => closed.0 += 1,
        LoopClosed::NonContractible => closed.1 += 1,
        LoopClosed::None => {}
    }
}

/// One layer of the rotated lattice: bit k of `tiles` applies the k-th
/// generator in the order e_0, e_2, …, e_1, e_3, ….
pub fn staggered_step(s: &LinkState, tiles: u32) -> (LinkState, (u32, u32)) {
    let l = s.len();
    let order = (0..l).step_by(2).chain((1..l).step_by(2));
    let mut state = s.clone();
    let mut closed = (0, 0);
    for (k, i) in order.enumerate() {
        if tiles >> k & 1 == 1 {
            let (next, what) = apply_generator(&state, i);
            tally(&mut closed, what);
            state = next;
        }
    }
    (state, closed)
}

/// One horizontal row of L vertices on top of the boundary `s`.
///
/// Vertex x has ports left, down, right, up. Tile bit 1 joins
/// (left, down) and (up, right); bit 0 joins (left, up) and (down, right).
/// The horizontal bond left of vertex 0 crosses the seam.
pub fn row_step(s: &LinkState, tiles: u32) -> (LinkState, (u32, u32)) {
    let l = s.len();
    // nodes: bottom point x → x, top point x → L + x, bond right of x → 2L + x
    let (bottom, top, bond) = (|x: usize| x, |x: usize| l + x, |x: usize| 2 * l + x);
    let mut edges: Vec<(usize, usize, u8)> = Vec::with_capacity(2 * l + l / 2);
    for x in 0..l {
        let left = bond((x + l - 1) % l);
        let seam = u8::from(x == 0);
        if tiles >> x & 1 == 1 {
            edges.push((left, bottom(x), seam));
            edges.push((top(x), bond(x), 0));
        } else {
            edges.push((left, top(x), seam));
            edges.push((bottom(x), bond(x), 0));
        }
    }
    for (a, b, p) in s.chords() {
        edges.push((bottom(a), bottom(b), p));
    }
    let mut incident = vec![[usize::MAX; 2]; 3 * l];
    for (k, &(u, v, _)) in edges.iter().enumerate() {
        for node in [u, v] {
            let slot = if incident[node][0] == usize::MAX { 0 } else { 1 };
            incident[node][slot] = k;
        }
    }
    let mut used = vec![false; edges.len()];
    // Walks from `node` along edge `k` until no unused edge remains.
    let walk = |mut node: usize, mut k: usize, used: &mut Vec<bool>| {
        let mut parity = 0u8;
        loop {
            used[k] = true;
            let (u, v, p) = edges[k];
            parity ^= p;
            node = if u == node { v } else { u };
            match incident[node].iter().find(|&&e| e != usize::MAX && !used[e]) {
                Some(&e) => k = e,
                None => return (node, parity),
            }
        }
    };
    let mut partner = vec![0u8; l];
    let mut parity = vec![0u8; l];
    for x in 0..l {
        let k = incident[top(x)][0];
        if used[k] {
            continue;
        }
        let (end, p) = walk(top(x), k, &mut used);
        let y = end - l;
        partner[x] = y as u8;
        partner[y] = x as u8;
        parity[x] = p;
        parity[y] = p;
    }
    let mut closed = (0, 0);
    for k in 0..edges.len() {
        if !used[k] {
            let (_, p) = walk(edges[k].0, k, &mut used);
            tally(&mut closed, if p == 1 { LoopClosed::NonContractible } else { LoopClosed::Contractible });
        }
    }
    (LinkState::from_raw(partner, parity), closed)
}

/// Loop transfer matrix over the states reachable from the adjacent
/// pattern, with entries resolved by closed-loop counts.
#[derive(Clone, Debug, Serialize)]
pub struct TransferMatrix {
    pub l: usize,
    pub geometry: Geometry,
    pub states: Vec<LinkState>,
    /// `rows[s]` maps target index to its entry.
    pub rows: Vec<BTreeMap<usize, FugacityEntry>>,
}

type StepFn = fn(&LinkState, u32) -> (LinkState, (u32, u32));

fn step_fn(geometry: Geometry) -> StepFn {
    match geometry {
        Geometry::RowToRow => row_step,
        Geometry::Staggered => staggered_step,
    }
}

fn transitions(s: &LinkState, geometry: Geometry) -> BTreeMap<LinkState, FugacityEntry> {
    let step = step_fn(geometry);
    let merged = (0..1u32 << s.len())
        .into_par_iter()
        .fold(HashMap::new, |mut acc: HashMap<LinkState, FugacityEntry>, tiles| {
            let (next, closed) = step(s, tiles);
            acc.entry(next).or_default().add(closed, 1);
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, e) in b {
                let cur = a.remove(&k).unwrap_or_default();
                a.insert(k, cur.merge(e));
            }
            a
        });
    merged.into_iter().collect()
}

impl TransferMatrix {
    pub fn build(l: usize, geometry: Geometry) -> Result<Self> {
        if l < 2 || l % 2 == 1 || l > MAX_ORACLE_L {
            return Err(Error::InvalidArgument(format!("L = {l} must be even and in 2..={MAX_ORACLE_L}")));
        }
        let mut index: HashMap<LinkState, usize> = HashMap::new();
        let mut states = vec![LinkState::adjacent(l)];
        index.insert(states[0].clone(), 0);
        let mut raw_rows = Vec::new();
        let mut k = 0;
        while k < states.len() {
            let row = transitions(&states[k], geometry);
            let mut mapped = BTreeMap::new();
            for (next, entry) in row {
                let id = *index.entry(next.clone()).or_insert_with(|| {
                    states.push(next);
                    states.len() - 1
                });
                mapped.insert(id, entry);
            }
            raw_rows.push(mapped);
            k += 1;
        }
        // canonical order
        let mut order: Vec<usize> = (0..states.len()).collect();
        order.sort_by(|&a, &b| states[a].cmp(&states[b]));
        let mut rank = vec![0; states.len()];
        for (new, &old) in order.iter().enumerate() {
            rank[old] = new;
        }
        let rows = order
            .iter()
            .map(|&old| raw_rows[old].iter().map(|(&to, e)| (rank[to], e.clone())).collect())
            .collect();
        let states = order.iter().map(|&old| states[old].clone()).collect();
        Ok(TransferMatrix { l, geometry, states, rows })
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    /// Integer matrix at w = v = 1.
    pub fn at_unit_fugacity(&self) -> Vec<Vec<BigInt>> {
        let n = self.dim();
        self.rows
            .iter()
            .map(|row| {
                let mut dense = vec![BigInt::from(0); n];
                for (&to, e) in row {
                    dense[to] = BigInt::from(e.total());
                }
                dense
            })
            .collect()
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.rows.iter().map(|r| r.values().map(FugacityEntry::total).sum()).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// Left Perron vector at w = v = 1 for eigenvalue 2^L, normalized to
    /// sum one.
    pub fn perron_left(&self) -> Result<Vec<Rational>> {
        let lambda = 1u64 << self.l;
        if let Some(bad) = self.row_sums().into_iter().find(|&s| s != lambda) {
            return Err(Error::Inconsistency {
                what: "row sum",
                detail: format!("expected {lambda}, found {bad}"),
            });
        }
        let mut m = self.at_unit_fugacity();
        for (i, row) in m.iter_mut().enumerate() {
            row[i] -= BigInt::from(lambda);
        }
        Ok(left_null_vector(&m)?.entries)
    }

    /// Expected contractible, non-contractible and total closures per layer
    /// in the stationary state.
    pub fn expected_closures(&self) -> Result<(Rational, Rational, Rational)> {
        let pi = self.perron_left()?;
        let lambda = Rational::from(1i64 << self.l);
        let expect = |f: fn(&FugacityEntry) -> u64| -> Rational {
            let s: Rational = pi
                .iter()
                .zip(&self.rows)
                .map(|(p, row)| p * &Rational::from(row.values().map(f).sum::<u64>() as i64))
                .sum();
            s / lambda.clone()
        };
        Ok((
            expect(FugacityEntry::d_contractible),
            expect(FugacityEntry::d_non_contractible),
            expect(FugacityEntry::d_common),
        ))
    }
}

/// Row-to-row loop transfer matrix with L plaquettes per layer.
pub fn double_row_matrix(l: usize) -> Result<TransferMatrix> {
    TransferMatrix::build(l, Geometry::RowToRow)
}

/// Exact densities per site from first-order perturbation of the Perron
/// eigenvalue in the loop fugacities.
pub fn oracle_densities(l: usize) -> Result<DensityRecord> {
    let tm = double_row_matrix(l)?;
    let (c, nc, both) = tm.expected_closures()?;
    if &c + &nc != both {
        return Err(Error::Inconsistency {
            what: "fugacity derivatives",
            detail: format!("{c} + {nc} ≠ {both}"),
        });
    }
    let sites = Rational::from(l as i64);
    Ok(DensityRecord::new((l / 2) as u32, c / sites.clone(), nc / sites, Method::TransferOracle))
}
