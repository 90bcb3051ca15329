#![allow(dead_code)]

//! Brute-force model of the catalog rings, written without the ring code's
//! exponent bounds or normal forms: monomials are enumerated over a full
//! exponent box, orders come from the diagonalized relation rows, and
//! product signs from bubble-sorting generator words.

use std::collections::BTreeMap;

use knotalg::algebra::{Commutation, GeneratorKind, RingPresentation};
use knotalg::catalog::{CatalogKey, Space};

pub const CAP: u32 = 40;
pub const LO: i64 = -30;
pub const HI: i64 = 30;

pub struct Model<'a> {
    ring: &'a RingPresentation,
    degs: Vec<i64>,
    exterior: Vec<bool>,
    central: Vec<bool>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl<'a> Model<'a> {
    pub fn new(ring: &'a RingPresentation) -> Self {
        let g = ring.generators();
        Model {
            ring,
            degs: g.iter().map(|g| g.degree).collect(),
            exterior: g.iter().map(|g| g.kind == GeneratorKind::Exterior).collect(),
            central: g.iter().map(|g| g.commutation == Commutation::Central).collect(),
        }
    }

    pub fn word(e: &[u32]) -> Vec<usize> {
        e.iter().enumerate().flat_map(|(i, &k)| std::iter::repeat_n(i, k as usize)).collect()
    }

    fn swap_sign(&self, a: usize, b: usize) -> i64 {
        if self.central[a] && self.central[b] {
            return 1;
        }
        if (self.degs[a] * self.degs[b]).rem_euclid(2) == 1 {
            -1
        } else {
            1
        }
    }

    /// Sorts a word, returning the sign picked up; `None` if an exterior
    /// generator repeats.
    pub fn sort(&self, mut w: Vec<usize>) -> Option<(i64, Vec<u32>)> {
        let mut sign = 1;
        for i in 0..w.len() {
            for j in 0..w.len() - 1 - i {
                if w[j] > w[j + 1] {
                    sign *= self.swap_sign(w[j], w[j + 1]);
                    w.swap(j, j + 1);
                }
            }
        }
        let mut e = vec![0u32; self.degs.len()];
        for &g in &w {
            e[g] += 1;
        }
        if e.iter().zip(&self.exterior).any(|(&k, &x)| x && k > 1) {
            return None;
        }
        Some((sign, e))
    }

    fn divides(m: &[u32], e: &[u32]) -> bool {
        m.iter().zip(e).all(|(a, b)| a <= b)
    }

    /// 0 for free, 1 for zero, otherwise the torsion order: gcd of all
    /// relation rows landing on the monomial (including `2x² = 0` for odd
    /// Koszul polynomial generators).
    pub fn order(&self, e: &[u32]) -> u64 {
        let mut g = 0u64;
        for r in self.ring.relations() {
            let m = r.monomial().exponents();
            if Self::divides(m, e) {
                let rest: Vec<u32> = e.iter().zip(m).map(|(a, b)| a - b).collect();
                let mut w = Self::word(m);
                w.extend(Self::word(&rest));
                if let Some((sign, _)) = self.sort(w) {
                    g = gcd(g, (sign * r.coefficient() as i64).unsigned_abs());
                }
            }
        }
        for i in 0..self.degs.len() {
            if !self.exterior[i] && !self.central[i] && self.degs[i].rem_euclid(2) == 1 && e[i] >= 2 {
                g = gcd(g, 2);
            }
        }
        g
    }

    /// Nonzero monomials by degree in `[LO, HI]`, over the full box.
    pub fn enumerate(&self) -> BTreeMap<i64, BTreeMap<Vec<u32>, u64>> {
        let k = self.degs.len();
        let mut out: BTreeMap<i64, BTreeMap<Vec<u32>, u64>> = BTreeMap::new();
        let mut e = vec![0u32; k];
        self.dfs(0, &mut e, &mut out);
        out
    }

    fn killed(&self, e: &[u32]) -> bool {
        e.iter().zip(&self.exterior).any(|(&k, &x)| x && k > 1)
            || self
                .ring
                .relations()
                .iter()
                .any(|r| r.coefficient() == 1 && Self::divides(r.monomial().exponents(), e))
    }

    fn dfs(&self, i: usize, e: &mut Vec<u32>, out: &mut BTreeMap<i64, BTreeMap<Vec<u32>, u64>>) {
        if i == e.len() {
            let d: i64 = e.iter().zip(&self.degs).map(|(&k, &g)| k as i64 * g).sum();
            if (LO..=HI).contains(&d) {
                let o = self.order(e);
                assert!(e.iter().all(|&k| k < CAP), "exponent box too small at {e:?}");
                if o != 1 {
                    out.entry(d).or_default().insert(e.clone(), o);
                }
            }
            return;
        }
        for k in 0..=CAP {
            e[i] = k;
            let partial: Vec<u32> = e.iter().enumerate().map(|(j, &x)| if j <= i { x } else { 0 }).collect();
            if self.killed(&partial) {
                break;
            }
            self.dfs(i + 1, e, out);
        }
        e[i] = 0;
    }
}

pub fn catalog() -> Vec<(String, RingPresentation)> {
    let mut rings = Vec::new();
    for n in 3..=6 {
        for space in Space::ALL {
            let key = CatalogKey::new(space, n).unwrap();
            if key.is_supported() {
                rings.push((format!("{} n={n}", space.key()), key.build().unwrap()));
            }
        }
    }
    rings
}
