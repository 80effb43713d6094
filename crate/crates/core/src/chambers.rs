//! Chambers of the cone `C(A_r^+)` and the chamber pairing.
//!
//! Walls are the hyperplanes `sum_{i in A} a_i = 0`. A big chamber is a
//! connected component of the regular points with respect to the cones spanned
//! by bases of `A_r^+`; it is described by the signed list of permutations `w`
//! whose cone `C_w^+` contains it.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{clear_denominators, feasible_point, solve, Constraint};
use crate::poly::{rat, Rational};
use crate::residue::{iterated_residue, iterated_residue_dp, ResidueForm, SBasisVector};
use crate::system::{FlowSystem, Permutation, Root, Weight};

/// Which residue engine evaluates `Ires^w`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Engine {
    /// Laurent expansion of the form.
    Series,
    /// Kostant partition function of the relabelled system.
    #[default]
    Dp,
}

/// `sum_{k in mask} a_k` (bit `k` stands for coordinate `k+1`).
fn wall_value(head: &[Rational], mask: u32) -> Rational {
    head.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, x)| x.clone()).sum()
}

/// No partial sum over a nonempty subset of the first `r` coordinates vanishes.
pub fn is_regular(a: &Weight) -> bool {
    let head = a.head();
    (1u32..1 << head.len()).all(|m| !wall_value(head, m).is_zero())
}

/// Membership of `a` in the closed cone `C_w^+`.
pub fn in_cw_plus(a: &Weight, w: &Permutation) -> bool {
    let head = a.head();
    let r = head.len();
    let mut s = Rational::zero();
    for i in 1..=r {
        s += &head[w.apply(i) - 1];
        let ok = if i == r || w.apply(i) < w.apply(i + 1) { !s.is_negative() } else { !s.is_positive() };
        if !ok {
            return false;
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChamberForm {
    rank: usize,
    witness: Weight,
    /// `(w, (-1)^{descents(w)})` for every `w` with the chamber inside `C_w^+`.
    members: Vec<(Permutation, i32)>,
}

impl ChamberForm {
    /// The chamber containing the regular point `a`.
    pub fn from_witness(a: &Weight) -> Result<ChamberForm> {
        if !a.in_cone() {
            return Err(Error::OutsideCone(a.to_string()));
        }
        if !is_regular(a) {
            return Err(Error::NotRegular(a.to_string()));
        }
        let r = a.rank();
        let members = Permutation::all(r)
            .into_iter()
            .filter(|w| in_cw_plus(a, w))
            .map(|w| {
                let s = if w.descents() % 2 == 0 { 1 } else { -1 };
                (w, s)
            })
            .collect();
        Ok(ChamberForm { rank: r, witness: a.clone(), members })
    }

    /// A chamber whose closure contains `a`, chosen by moving `a` along
    /// `(ε, ε², ..., ε^r)` for an infinitesimal `ε > 0`.
    pub fn locate(a: &Weight) -> Result<ChamberForm> {
        if !a.in_cone() {
            return Err(Error::OutsideCone(a.to_string()));
        }
        if is_regular(a) {
            return Self::from_witness(a);
        }
        let head = a.head();
        let r = head.len();
        let min_gap = (1u32..1 << r)
            .map(|m| wall_value(head, m).abs())
            .filter(|x| !x.is_zero())
            .min()
            .unwrap_or_else(Rational::one);
        let delta = (min_gap / rat(4)).min(Rational::new(1.into(), 2.into()));
        let mut shifted = head.to_vec();
        let mut p = Rational::one();
        for x in shifted.iter_mut() {
            p *= &delta;
            *x += &p;
        }
        // the chamber is a cone, so an integral multiple is an equally good witness
        Self::from_witness(&Weight::embed(&clear_denominators(&shifted)))
    }

    /// The chamber containing `(1, ..., 1)`; its only member is the identity.
    pub fn nice(r: usize) -> ChamberForm {
        Self::from_witness(&Weight::embed_ints(&vec![1; r])).expect("all-ones is regular")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn witness(&self) -> &Weight {
        &self.witness
    }

    pub fn members(&self) -> &[(Permutation, i32)] {
        &self.members
    }

    pub fn is_nice(&self) -> bool {
        self.members.len() == 1 && self.members[0].0 == Permutation::identity(self.rank)
    }

    /// `<<c, v>>` for a vector on the basis `{f_w}`.
    pub fn pair(&self, v: &SBasisVector) -> Rational {
        self.members.iter().map(|(w, s)| v.get(w) * rat(*s as i64)).sum()
    }

    /// `<<c, f>>` for a form, evaluating each `Ires^w` with the series engine.
    pub fn pair_form(&self, f: &ResidueForm) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (w, s) in &self.members {
            acc += iterated_residue(f, w)? * rat(*s as i64);
        }
        Ok(acc)
    }

    /// `<<c, x^i / prod_Φ α>>`.
    pub fn pair_monomial(&self, system: &FlowSystem, exps: &[u32], engine: Engine) -> Result<Rational> {
        if system.rank() != self.rank {
            return Err(Error::InvalidSystem(format!(
                "system rank {} does not match chamber rank {}",
                system.rank(),
                self.rank
            )));
        }
        match engine {
            Engine::Dp => {
                let mut acc = Rational::zero();
                for (w, s) in &self.members {
                    acc += Rational::from_integer(iterated_residue_dp(system, exps, w)? * *s);
                }
                Ok(acc)
            }
            Engine::Series => self.pair_form(&ResidueForm::monomial_quotient(system, exps)?),
        }
    }

    pub fn member_string(&self) -> String {
        let parts: Vec<String> = self
            .members
            .iter()
            .map(|(w, s)| format!("{}{}", w, if *s > 0 { "+" } else { "-" }))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

impl fmt::Display for ChamberForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        for (k, (w, sign)) in self.members.iter().enumerate() {
            match (k, *sign > 0) {
                (0, true) => {}
                (0, false) => s.push('-'),
                (_, true) => s.push_str(" + "),
                (_, false) => s.push_str(" - "),
            }
            s.push_str(&w.to_string());
        }
        f.write_str(&s)
    }
}

/// Bases of `A_r^+`: sets of `r` linearly independent positive roots.
pub fn bases(r: usize) -> Vec<Vec<Root>> {
    let roots = FlowSystem::complete(r).expect("rank >= 1").roots();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(roots: &[Root], start: usize, r: usize, cur: &mut Vec<Root>, out: &mut Vec<Vec<Root>>) {
        if cur.len() == r {
            let rows: Vec<Vec<Rational>> = cur.iter().map(|x| root_vector(r, x)).collect();
            if crate::linalg::rank(rows) == r {
                out.push(cur.clone());
            }
            return;
        }
        for k in start..roots.len() {
            cur.push(roots[k]);
            rec(roots, k + 1, r, cur, out);
            cur.pop();
        }
    }
    rec(&roots, 0, r, &mut cur, &mut out);
    out
}

/// First `r` coordinates of a root.
pub fn root_vector(r: usize, x: &Root) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); r];
    v[x.i - 1] = rat(1);
    if x.j <= r {
        v[x.j - 1] = rat(-1);
    }
    v
}

/// Membership of `a` in the closed cone spanned by a basis.
pub fn in_basis_cone(a: &Weight, basis: &[Root]) -> bool {
    let r = a.rank();
    let cols: Vec<Vec<Rational>> = basis.iter().map(|x| root_vector(r, x)).collect();
    match solve(&cols, a.head()) {
        Some(lambda) => lambda.iter().all(|l| !l.is_negative()),
        None => false,
    }
}

/// A region cut out by all walls.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallChamber {
    /// Sign of each wall `sum_{k in A} a_k`, walls ordered by the bitmask of `A`.
    pub signs: Vec<bool>,
    pub witness: Weight,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigChamber {
    pub form: ChamberForm,
    pub small: Vec<SmallChamber>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChamberEnumeration {
    pub rank: usize,
    pub small_count: usize,
    pub chambers: Vec<BigChamber>,
}

/// Largest rank accepted by [`enumerate_big_chambers`].
pub const MAX_ENUMERATION_RANK: usize = 4;

/// All small and big chambers of `C(A_r^+)`. Small chambers come from
/// Fourier–Motzkin feasibility of wall sign patterns; they are grouped into big
/// chambers by the set of basis cones containing them.
pub fn enumerate_big_chambers(r: usize) -> Result<ChamberEnumeration> {
    if r == 0 || r > MAX_ENUMERATION_RANK {
        return Err(Error::OutOfRange(format!("chamber enumeration needs 1 <= r <= {MAX_ENUMERATION_RANK}")));
    }
    let small = small_chambers(r);
    let bs = bases(r);
    let signatures: Vec<Vec<bool>> =
        small.par_iter().map(|c| bs.iter().map(|b| in_basis_cone(&c.witness, b)).collect()).collect();
    let mut groups: BTreeMap<Vec<bool>, Vec<SmallChamber>> = BTreeMap::new();
    for (c, sig) in small.iter().zip(signatures) {
        groups.entry(sig).or_default().push(c.clone());
    }
    let mut chambers: Vec<BigChamber> = groups
        .into_values()
        .map(|mut cs| {
            cs.sort_by(|a, b| a.signs.cmp(&b.signs));
            let form = ChamberForm::from_witness(&cs[0].witness).expect("small-chamber witness is regular");
            BigChamber { form, small: cs }
        })
        .collect();
    chambers.sort_by(|a, b| a.small[0].signs.cmp(&b.small[0].signs));
    Ok(ChamberEnumeration { rank: r, small_count: small.len(), chambers })
}

fn small_chambers(r: usize) -> Vec<SmallChamber> {
    let masks: Vec<u32> = (1u32..1 << r).collect();
    let is_prefix = |m: u32| (m + 1).is_power_of_two();
    let wall = |m: u32| -> Vec<Rational> { (0..r).map(|k| rat((m >> k & 1) as i64)).collect() };
    let mut out = Vec::new();
    // depth-first over walls, keeping a feasible point for the current prefix
    fn rec(
        r: usize,
        masks: &[u32],
        depth: usize,
        cons: &mut Vec<Constraint>,
        signs: &mut Vec<bool>,
        point: &[Rational],
        is_prefix: &dyn Fn(u32) -> bool,
        wall: &dyn Fn(u32) -> Vec<Rational>,
        out: &mut Vec<SmallChamber>,
    ) {
        if depth == masks.len() {
            let p = clear_denominators(point);
            out.push(SmallChamber { signs: signs.clone(), witness: Weight::embed(&p) });
            return;
        }
        let m = masks[depth];
        let choices: &[bool] = if is_prefix(m) { &[true] } else { &[false, true] };
        for &positive in choices {
            let sign = if positive { rat(1) } else { rat(-1) };
            let coeffs: Vec<Rational> = wall(m).iter().map(|c| c * &sign).collect();
            let value: Rational = coeffs.iter().zip(point).map(|(a, b)| a * b).sum();
            cons.push((coeffs, rat(1)));
            let next = if value >= rat(1) { Some(point.to_vec()) } else { feasible_point(r, cons) };
            if let Some(p) = next {
                signs.push(positive);
                rec(r, masks, depth + 1, cons, signs, &p, is_prefix, wall, out);
                signs.pop();
            }
            cons.pop();
        }
    }
    let start: Vec<Rational> = vec![rat(1); r];
    rec(r, &masks, 0, &mut Vec::new(), &mut Vec::new(), &start, &is_prefix, &wall, &mut out);
    out
}
