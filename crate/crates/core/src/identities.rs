//! Weyl-symmetry identities of the nice-chamber polynomials, the
//! Pitman–Stanley closed forms and the low-rank chamber tables.

use std::collections::BTreeSet;

use crate::chambers::{enumerate_big_chambers, ChamberForm};
use crate::error::{Error, Result};
use crate::kostant::kostant_count;
use crate::poly::{rat, MultiPoly, Rational};
use crate::residue::{iterated_residue, ResidueForm};
use crate::system::{FlowSystem, Permutation, Weight};
use crate::volume::{compositions, ehrhart_polynomial, volume_polynomial, EhrhartForm};

fn is_interval(positions: &BTreeSet<usize>) -> bool {
    match (positions.first(), positions.last()) {
        (Some(&lo), Some(&hi)) => hi - lo + 1 == positions.len(),
        _ => true,
    }
}

fn preimage(w: &Permutation, values: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
    let inv = w.inverse();
    values.into_iter().map(|v| inv.apply(v)).collect()
}

/// `w ∈ B_N`: every `w^{-1}{1..k}` is an interval.
pub fn is_in_bn(w: &Permutation) -> bool {
    (1..=w.len()).all(|k| is_interval(&preimage(w, 1..=k)))
}

/// `B_N`, built by the doubling `w ↦ [w, N+1], [N+1, w]`.
pub fn enumerate_bn(n: usize) -> Vec<Permutation> {
    if n == 0 {
        return vec![];
    }
    let mut lines: Vec<Vec<usize>> = vec![vec![1]];
    for m in 2..=n {
        let mut next = Vec::with_capacity(2 * lines.len());
        for l in &lines {
            let mut right = l.clone();
            right.push(m);
            let mut left = vec![m];
            left.extend(l);
            next.push(right);
            next.push(left);
        }
        lines = next;
    }
    let mut out: Vec<Permutation> = lines.iter().map(|l| Permutation::from_one_line(l).expect("valid")).collect();
    out.sort();
    out
}

/// `w ∈ W^{i,r}`: `w` fixes `1..i-1` and every `w^{-1}{i, r, r-1, ..., r-s}` is an interval.
pub fn is_in_wir(w: &Permutation, i: usize) -> bool {
    let r = w.len();
    if i == 0 || i > r || (1..i).any(|k| w.apply(k) != k) {
        return false;
    }
    (0..=r - i).all(|s| {
        let mut set = vec![i];
        set.extend((r - s..=r).filter(|&v| v != i));
        is_interval(&preimage(w, set))
    })
}

/// The element `r̂(w)` of `Σ_{r-1}`: the one-line list of `w` with `r` removed.
pub fn drop_top(w: &Permutation) -> Permutation {
    let r = w.len();
    let line: Vec<usize> = w.one_line().into_iter().filter(|&v| v != r).collect();
    Permutation::from_one_line(&line).expect("valid")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WirSet {
    pub i: usize,
    pub r: usize,
    pub elements: Vec<Permutation>,
}

impl WirSet {
    /// `w^{-1}(i)` for each element.
    pub fn positions(&self) -> Vec<usize> {
        self.elements.iter().map(|w| w.inverse().apply(self.i)).collect()
    }

    pub fn contains(&self, w: &Permutation) -> bool {
        self.elements.binary_search(w).is_ok()
    }
}

/// `W^{i,r}` by the left/right construction: start from `i`, place `r, r-1, ..., i+1`
/// at either end of the block, then prepend `1..i-1`.
pub fn enumerate_wir(i: usize, r: usize) -> Result<WirSet> {
    if i == 0 || i > r {
        return Err(Error::OutOfRange(format!("need 1 <= i <= r, got i = {i}, r = {r}")));
    }
    let mut blocks: Vec<Vec<usize>> = vec![vec![i]];
    for v in (i + 1..=r).rev() {
        let mut next = Vec::with_capacity(2 * blocks.len());
        for b in &blocks {
            let mut left = vec![v];
            left.extend(b);
            let mut right = b.clone();
            right.push(v);
            next.push(left);
            next.push(right);
        }
        blocks = next;
    }
    let mut elements: Vec<Permutation> = blocks
        .into_iter()
        .map(|b| {
            let mut line: Vec<usize> = (1..i).collect();
            line.extend(b);
            Permutation::from_one_line(&line).expect("valid")
        })
        .collect();
    elements.sort();
    Ok(WirSet { i, r, elements })
}

/// Outcome of testing one identity under its stated sign and nearby variants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignReport {
    pub name: String,
    pub i: usize,
    pub r: usize,
    pub stated: bool,
    pub variants: Vec<(String, bool)>,
}

impl SignReport {
    pub fn confirmed(&self) -> Vec<&str> {
        let mut out = Vec::new();
        if self.stated {
            out.push("stated");
        }
        out.extend(self.variants.iter().filter(|(_, ok)| *ok).map(|(n, _)| n.as_str()));
        out
    }
}

fn parity(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `Ires(T(i, r+1) f_v)` for every `v ∈ Σ_r`, with `e^{r+1} = 0`.
pub fn transposed_basis_residues(i: usize, r: usize) -> Result<Vec<(Permutation, Rational)>> {
    if i == 0 || i > r {
        return Err(Error::OutOfRange(format!("need 1 <= i <= r, got i = {i}, r = {r}")));
    }
    let swap = |k: usize| {
        if k == i {
            r + 1
        } else if k == r + 1 {
            i
        } else {
            k
        }
    };
    let id = Permutation::identity(r);
    Permutation::all(r)
        .into_iter()
        .map(|v| {
            let line = v.one_line();
            let mut roots: Vec<(usize, usize, u32)> = line.windows(2).map(|p| (swap(p[0]), swap(p[1]), 1)).collect();
            roots.push((swap(line[r - 1]), swap(r + 1), 1));
            let f = ResidueForm::from_roots(r, crate::poly::LaurentPoly::one(r), &roots)?;
            Ok((v, iterated_residue(&f, &id)?))
        })
        .collect()
}

/// `T(i, r+1)·Ires = sum_{w ∈ W^{i,r}} (-1)^{r+1-w^{-1}(i)} w·Ires`, checked by
/// pairing both sides with every `f_v`.
pub fn syme_check(i: usize, r: usize) -> Result<SignReport> {
    let wir = enumerate_wir(i, r)?;
    let values = transposed_basis_residues(i, r)?;
    let test = |coef: &dyn Fn(&Permutation) -> i64| {
        values.iter().all(|(v, val)| {
            let expected = if wir.contains(v) { coef(v) } else { 0 };
            *val == rat(expected)
        })
    };
    let u = |v: &Permutation| v.inverse().apply(i) as i64;
    let r_ = r as i64;
    Ok(SignReport {
        name: "syme".into(),
        i,
        r,
        stated: test(&|v| parity(r_ + 1 - u(v))),
        variants: vec![
            ("parity r-u".into(), test(&|v| parity(r_ - u(v)))),
            ("with ε(w)".into(), test(&|v| v.sign() as i64 * parity(r_ + 1 - u(v)))),
        ],
    })
}

fn nice_volume(r: usize) -> Result<MultiPoly> {
    volume_polynomial(&FlowSystem::complete(r)?, &ChamberForm::nice(r))
}

fn nice_ehrhart(r: usize) -> Result<MultiPoly> {
    ehrhart_polynomial(&FlowSystem::complete(r)?, &ChamberForm::nice(r), EhrhartForm::T)
}

/// `-(a_1 + ... + a_r) + c`, i.e. `a_{r+1} + c`.
fn last_coord(r: usize, c: i64) -> MultiPoly {
    MultiPoly::affine(r, &vec![rat(-1); r], rat(c))
}

/// Evaluate both sides of a Weyl-symmetry identity of `p` under a family of
/// coefficient rules and report which rules make the difference vanish.
fn symmetry_report(
    name: &str,
    p: &MultiPoly,
    i: usize,
    r: usize,
    lhs_shift: i64,
    rho_shift: bool,
) -> Result<SignReport> {
    let wir = enumerate_wir(i, r)?;
    let mut subs: Vec<MultiPoly> = (0..r).map(|k| MultiPoly::var(r, k)).collect();
    subs[i - 1] = last_coord(r, -lhs_shift);
    let lhs = p.compose(&subs);
    let terms: Vec<(i64, i64, MultiPoly)> = wir
        .elements
        .iter()
        .zip(wir.positions())
        .map(|(w, u)| {
            // (w^{-1} a)_m = a_{w(m)}; the ρ-shift adds ρ_{w(m)} - ρ_m = m - w(m)
            let subs: Vec<MultiPoly> = (1..=r)
                .map(|m| {
                    let c = if rho_shift { m as i64 - w.apply(m) as i64 } else { 0 };
                    MultiPoly::var(r, w.apply(m) - 1) + MultiPoly::constant(r, rat(c))
                })
                .collect();
            (w.sign() as i64, u as i64, p.compose(&subs))
        })
        .collect();
    let r_ = r as i64;
    let test = |coef: &dyn Fn(i64, i64) -> i64| {
        let mut rhs = MultiPoly::zero(r);
        for (eps, u, t) in &terms {
            rhs = rhs + t.scale(&rat(coef(*eps, *u)));
        }
        (&lhs - &rhs).is_zero()
    };
    Ok(SignReport {
        name: name.into(),
        i,
        r,
        stated: test(&|e, u| e * parity(r_ - u)),
        variants: vec![
            ("without ε(w)".into(), test(&|_, u| parity(r_ - u))),
            ("parity r+1-u".into(), test(&|e, u| e * parity(r_ + 1 - u))),
        ],
    })
}

/// `v⁺(T(i,r+1)·a) = sum_{w ∈ W^{i,r}} ε(w)(-1)^{r-w^{-1}(i)} v⁺(w^{-1}·a)` for `A_r^+`.
pub fn symmetry_check_volume(i: usize, r: usize) -> Result<SignReport> {
    symmetry_report("sym-volume", &nice_volume(r)?, i, r, 0, false)
}

/// The ρ-shifted identity for the nice-chamber Ehrhart polynomial of `A_r^+`.
pub fn symmetry_check_ehrhart(i: usize, r: usize) -> Result<SignReport> {
    symmetry_report("sym-ehrhart", &nice_ehrhart(r)?, i, r, (r - i + 1) as i64, true)
}

/// Both symmetry identities with caller-supplied polynomials (for reuse across `i`).
pub fn symmetry_checks_with(volume: &MultiPoly, ehrhart: &MultiPoly, i: usize, r: usize) -> Result<(SignReport, SignReport)> {
    Ok((
        symmetry_report("sym-volume", volume, i, r, 0, false)?,
        symmetry_report("sym-ehrhart", ehrhart, i, r, (r - i + 1) as i64, true)?,
    ))
}

pub struct NicePolynomials {
    pub volume: MultiPoly,
    pub ehrhart: MultiPoly,
}

pub fn nice_polynomials(r: usize) -> Result<NicePolynomials> {
    Ok(NicePolynomials { volume: nice_volume(r)?, ehrhart: nice_ehrhart(r)? })
}

/// `K_r = {i : i_1 + ... + i_k >= k for all k, |i| = r}`.
pub fn pitman_stanley_indices(r: usize) -> Vec<Vec<u32>> {
    compositions(r as u32, r)
        .into_iter()
        .filter(|i| {
            let mut s = 0;
            i.iter().enumerate().all(|(k, &x)| {
                s += x as usize;
                s > k
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PitmanStanley {
    pub r: usize,
    pub indices: Vec<Vec<u32>>,
    pub volume: MultiPoly,
    pub ehrhart: MultiPoly,
}

/// Closed forms: `sum_{i ∈ K_r} prod a_k^{i_k}/i_k!` and
/// `sum_{i ∈ K_r} ((a_1+1, i_1)) prod_{k>=2} ((a_k, i_k))`.
pub fn pitman_stanley(r: usize) -> Result<PitmanStanley> {
    if r == 0 {
        return Err(Error::OutOfRange("r must be at least 1".into()));
    }
    let indices = pitman_stanley_indices(r);
    let mut volume = MultiPoly::zero(r);
    let mut ehrhart = MultiPoly::zero(r);
    for i in &indices {
        let mut v = MultiPoly::one(r);
        let mut k = MultiPoly::one(r);
        for (j, &e) in i.iter().enumerate() {
            let a = MultiPoly::var(r, j);
            v = v.mul_monomial(&unit(r, j, e), &Rational::new(1.into(), crate::poly::factorial(e as u64)));
            let base = if j == 0 { &a + &MultiPoly::one(r) } else { a };
            k = &k * &MultiPoly::rising_binom(&base, e);
        }
        volume = volume + v;
        ehrhart = ehrhart + k;
    }
    Ok(PitmanStanley { r, indices, volume, ehrhart })
}

fn unit(r: usize, j: usize, e: u32) -> Vec<u32> {
    let mut v = vec![0; r];
    v[j] = e;
    v
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PitmanReport {
    pub r: usize,
    pub index_count: usize,
    pub volume_matches: bool,
    pub ehrhart_t_matches: bool,
    pub ehrhart_s_matches: bool,
    pub grid_points: usize,
    pub grid_mismatches: usize,
}

impl PitmanReport {
    pub fn passed(&self) -> bool {
        self.volume_matches && self.ehrhart_t_matches && self.ehrhart_s_matches && self.grid_mismatches == 0
    }
}

/// Compare the closed forms with the generic engine and with direct counts on `[0, grid]^r`.
pub fn pitman_check(r: usize, grid: i64) -> Result<PitmanReport> {
    let ps = pitman_stanley(r)?;
    let system = FlowSystem::pitman_stanley(r)?;
    let nice = ChamberForm::nice(r);
    let table = crate::volume::coefficient_table(&system, &nice, crate::chambers::Engine::Dp)?;
    let mut grid_points = 0;
    let mut grid_mismatches = 0;
    for point in grid_points_in(r, grid) {
        grid_points += 1;
        let count = kostant_count(&system, &Weight::embed_ints(&point))?.value;
        if ps.ehrhart.eval_int(&point) != Rational::from_integer(count.into()) {
            grid_mismatches += 1;
        }
    }
    Ok(PitmanReport {
        r,
        index_count: ps.indices.len(),
        volume_matches: table.volume_polynomial() == ps.volume,
        ehrhart_t_matches: table.ehrhart_polynomial(EhrhartForm::T) == ps.ehrhart,
        ehrhart_s_matches: table.ehrhart_polynomial(EhrhartForm::S) == ps.ehrhart,
        grid_points,
        grid_mismatches,
    })
}

/// All integer points of `[0, max]^r`.
pub fn grid_points_in(r: usize, max: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (0..=max).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

struct Golden {
    label: &'static str,
    members: &'static [&'static str],
    volume: &'static str,
    ehrhart: &'static str,
}

const A2_GOLDEN: &[Golden] = &[
    Golden { label: "c1", members: &["12"], volume: "a1", ehrhart: "a1 + 1" },
    Golden { label: "c2", members: &["12", "21"], volume: "a1 + a2", ehrhart: "a1 + a2 + 1" },
];

const A3_GOLDEN: &[Golden] = &[
    Golden {
        label: "c1",
        members: &["123"],
        volume: "1/6*a1^3 + 1/2*a1^2*a2",
        ehrhart: "1/6*a1^3 + 1/2*a1^2*a2 + a1^2 + 3/2*a1*a2 + 11/6*a1 + a2 + 1",
    },
    Golden {
        label: "c2",
        members: &["123", "213", "312", "321"],
        volume: "1/6*a1^3 + 1/2*a1^2*a2 + 1/2*a1*a2^2 - 1/2*a1*a3^2 + 1/6*a2^3 - 1/2*a2*a3^2 - 1/3*a3^3",
        ehrhart: "1/6*a1^3 + 1/2*a1^2*a2 + 1/2*a1*a2^2 - 1/2*a1*a3^2 + 1/6*a2^3 - 1/2*a2*a3^2 - 1/3*a3^3 + a1^2 + 2*a1*a2 + 1/2*a1*a3 + a2^2 + 1/2*a2*a3 - 1/2*a3^2 + 11/6*a1 + 11/6*a2 + 5/6*a3 + 1",
    },
    Golden {
        label: "c3",
        members: &["123", "312"],
        volume: "1/6*a1^3 + 1/2*a1^2*a2 - 1/2*a1*a3^2 - 1/6*a3^3",
        ehrhart: "1/6*a1^3 + 1/2*a1^2*a2 - 1/2*a1*a3^2 - 1/6*a3^3 + a1^2 + 3/2*a1*a2 + 1/2*a1*a3 - 1/2*a3^2 + 11/6*a1 + a2 + 2/3*a3 + 1",
    },
    Golden {
        label: "c4",
        members: &["123", "231", "312", "321"],
        volume: "1/6*a1^3 + 1/2*a1^2*a2 - 1/2*a1*a3^2 - 1/6*a2^3 - 1/2*a2^2*a3 - 1/2*a2*a3^2 - 1/3*a3^3",
        ehrhart: "1/6*a1^3 + 1/2*a1^2*a2 - 1/2*a1*a3^2 - 1/6*a2^3 - 1/2*a2^2*a3 - 1/2*a2*a3^2 - 1/3*a3^3 + a1^2 + 3/2*a1*a2 + 1/2*a1*a3 - 1/2*a3^2 + 11/6*a1 + 7/6*a2 + 5/6*a3 + 1",
    },
    Golden {
        label: "c5",
        members: &["123", "132"],
        volume: "1/3*a1^3 + 1/2*a1^2*a2 + 1/2*a1^2*a3",
        ehrhart: "1/3*a1^3 + 1/2*a1^2*a2 + 1/2*a1^2*a3 + 3/2*a1^2 + 3/2*a1*a2 + 3/2*a1*a3 + 13/6*a1 + a2 + a3 + 1",
    },
    Golden {
        label: "c6",
        members: &["123", "132", "231", "321"],
        volume: "1/3*a1^3 + 1/2*a1^2*a2 + 1/2*a1^2*a3 - 1/6*a2^3 - 1/2*a2^2*a3 - 1/2*a2*a3^2 - 1/6*a3^3",
        ehrhart: "1/3*a1^3 + 1/2*a1^2*a2 + 1/2*a1^2*a3 - 1/6*a2^3 - 1/2*a2^2*a3 - 1/2*a2*a3^2 - 1/6*a3^3 + 3/2*a1^2 + 3/2*a1*a2 + 3/2*a1*a3 + 13/6*a1 + 7/6*a2 + 7/6*a3 + 1",
    },
    Golden {
        label: "c7",
        members: &["123", "213"],
        volume: "1/6*a1^3 + 1/2*a1^2*a2 + 1/2*a1*a2^2 + 1/6*a2^3",
        ehrhart: "1/6*a1^3 + 1/2*a1^2*a2 + 1/2*a1*a2^2 + 1/6*a2^3 + a1^2 + 2*a1*a2 + a2^2 + 11/6*a1 + 11/6*a2 + 1",
    },
];

fn goldens(r: usize) -> Result<&'static [Golden]> {
    match r {
        2 => Ok(A2_GOLDEN),
        3 => Ok(A3_GOLDEN),
        _ => Err(Error::OutOfRange(format!("tables exist for r = 2, 3 only, got {r}"))),
    }
}

fn member_key(form: &ChamberForm) -> BTreeSet<String> {
    form.members()
        .iter()
        .map(|(w, _)| w.one_line().iter().map(|d| d.to_string()).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AppendixRow {
    /// Chamber label `c1, c2, ...`, or `?` when no stored row has this member set.
    pub label: String,
    pub chamber: ChamberForm,
    pub volume: MultiPoly,
    pub ehrhart: MultiPoly,
    pub expected_volume: Option<String>,
    pub expected_ehrhart: Option<String>,
}

impl AppendixRow {
    pub fn matches(&self) -> bool {
        self.expected_volume.as_deref() == Some(&self.volume.to_string())
            && self.expected_ehrhart.as_deref() == Some(&self.ehrhart.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AppendixTable {
    pub r: usize,
    pub rows: Vec<AppendixRow>,
    /// Stored rows that no enumerated chamber matched.
    pub missing: Vec<String>,
}

impl AppendixTable {
    pub fn passed(&self) -> bool {
        self.missing.is_empty() && self.rows.iter().all(AppendixRow::matches)
    }
}

/// Every big chamber of `A_r^+` (`r ∈ {2, 3}`) with its volume and Ehrhart
/// polynomials, compared byte for byte with the stored expanded forms.
pub fn appendix_tables(r: usize) -> Result<AppendixTable> {
    let gold = goldens(r)?;
    let system = FlowSystem::complete(r)?;
    let mut seen = BTreeSet::new();
    let mut rows = Vec::new();
    for big in enumerate_big_chambers(r)?.chambers {
        let key = member_key(&big.form);
        let g = gold.iter().find(|g| g.members.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>() == key);
        if let Some(g) = g {
            seen.insert(g.label);
        }
        let table = crate::volume::coefficient_table(&system, &big.form, crate::chambers::Engine::Dp)?;
        rows.push(AppendixRow {
            label: g.map_or("?".to_string(), |g| g.label.to_string()),
            chamber: big.form,
            volume: table.volume_polynomial(),
            ehrhart: table.ehrhart_polynomial(EhrhartForm::T),
            expected_volume: g.map(|g| g.volume.to_string()),
            expected_ehrhart: g.map(|g| g.ehrhart.to_string()),
        });
    }
    let missing = gold.iter().filter(|g| !seen.contains(g.label)).map(|g| g.label.to_string()).collect();
    Ok(AppendixTable { r, rows, missing })
}

/// The `A_3^+` chambers whose Ehrhart polynomials all restrict to
/// `(x+1)(x+2)(x+3)/6` on the ray `a = (x, 0, 0)`.
pub const CONTINUITY_LABELS: [&str; 5] = ["c1", "c2", "c3", "c4", "c7"];

/// Labels of the rows of `table` whose Ehrhart polynomial restricts to `(x+1)(x+2)(x+3)/6` on `(x, 0, 0)`.
pub fn continuity_on_first_axis(table: &AppendixTable) -> Vec<String> {
    let x = MultiPoly::var(1, 0);
    let target = &(&(&x + &MultiPoly::constant(1, rat(1))) * &(&x + &MultiPoly::constant(1, rat(2))))
        * &(&x + &MultiPoly::constant(1, rat(3)));
    let target = target.scale(&Rational::new(1.into(), 6.into()));
    let subs = vec![x.clone(), MultiPoly::zero(1), MultiPoly::zero(1)];
    table
        .rows
        .iter()
        .filter(|row| row.ehrhart.nvars() == 3 && row.ehrhart.compose(&subs) == target)
        .map(|row| row.label.clone())
        .collect()
}

/// For a chamber `c` of `A_r^+`, compare `v(c)(a)` with
/// `sum_{w ∈ members} (-1)^{n(w)} v⁺(w^{-1} a)` (the restatement as written) and
/// with the same sum weighted by `ε(w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestatementReport {
    pub label: String,
    pub as_written: bool,
    pub with_epsilon: bool,
}

pub fn chamber_restatement(table: &AppendixTable) -> Result<Vec<RestatementReport>> {
    let r = table.r;
    let nice = table
        .rows
        .iter()
        .find(|row| row.chamber.is_nice())
        .ok_or_else(|| Error::IdentityViolation("no nice chamber in the table".into()))?;
    let vplus = &nice.volume;
    Ok(table
        .rows
        .iter()
        .map(|row| {
            let mut plain = MultiPoly::zero(r);
            let mut signed = MultiPoly::zero(r);
            for (w, s) in row.chamber.members() {
                let subs: Vec<MultiPoly> = (1..=r).map(|m| MultiPoly::var(r, w.apply(m) - 1)).collect();
                let t = vplus.compose(&subs).scale(&rat(*s as i64));
                signed = signed + t.scale(&rat(w.sign() as i64));
                plain = plain + t;
            }
            RestatementReport {
                label: row.label.clone(),
                as_written: plain == row.volume,
                with_epsilon: signed == row.volume,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use crate::volume::catalan;

    fn p(s: &str) -> Permutation {
        Permutation::parse(s).unwrap()
    }

    #[test]
    fn bn_matches_definition() {
        for n in 1..=6 {
            let built = enumerate_bn(n);
            assert_eq!(built.len(), 1 << (n - 1));
            let filtered: Vec<Permutation> = Permutation::all(n).into_iter().filter(is_in_bn).collect();
            assert_eq!(built, filtered);
        }
        assert_eq!(enumerate_bn(2), vec![p("12"), p("21")]);
    }

    #[test]
    fn wir_matches_definition() {
        for r in 1..=6 {
            for i in 1..=r {
                let built = enumerate_wir(i, r).unwrap();
                assert_eq!(built.elements.len(), 1 << (r - i));
                let filtered: Vec<Permutation> = Permutation::all(r).into_iter().filter(|w| is_in_wir(w, i)).collect();
                assert_eq!(built.elements, filtered, "i={i} r={r}");
            }
        }
    }

    #[test]
    fn wir_explicit_lists() {
        assert_eq!(enumerate_wir(4, 4).unwrap().elements, vec![p("1234")]);
        assert_eq!(enumerate_wir(3, 4).unwrap().elements, vec![p("1234"), p("1243")]);
        let mut listed = vec![p("1243"), p("1423"), p("1324"), p("1342")];
        listed.sort();
        assert_eq!(enumerate_wir(2, 4).unwrap().elements, listed);
    }

    #[test]
    fn drop_top_recursion() {
        for r in 2..=6 {
            for i in 1..r {
                let smaller = enumerate_wir(i, r - 1).unwrap();
                for w in Permutation::all(r) {
                    let adjacent = is_interval(&preimage(&w, [i, r]));
                    assert_eq!(is_in_wir(&w, i), adjacent && smaller.contains(&drop_top(&w)), "{w}");
                }
            }
        }
    }

    #[test]
    fn syme_as_stated() {
        for r in 1..=3 {
            for i in 1..=r {
                let rep = syme_check(i, r).unwrap();
                assert!(rep.stated, "{rep:?}");
            }
        }
    }

    #[test]
    fn sym_examples_r3() {
        let names = crate::poly::var_names("a", 3);
        let v = nice_volume(3).unwrap();
        let k = nice_ehrhart(3).unwrap();
        // v⁺(x1, -(x1+x2+x3)) = -v⁺(x1, x2) - v⁺(x1, x3)
        let at = |f: &MultiPoly, a: &str| {
            f.compose(&[parse_poly("a1", &names).unwrap(), parse_poly(a, &names).unwrap(), MultiPoly::zero(3)])
        };
        assert_eq!(at(&v, "-(a1+a2+a3)"), -(at(&v, "a2") + at(&v, "a3")));
        assert_eq!(at(&k, "-(a1+a2+a3+2)"), -(at(&k, "a2") + at(&k, "a3-1")));
        for i in 1..=3 {
            assert!(symmetry_check_volume(i, 3).unwrap().stated);
            assert!(symmetry_check_ehrhart(i, 3).unwrap().stated);
        }
    }

    #[test]
    fn pitman_stanley_small() {
        let names = crate::poly::var_names("a", 2);
        let ps2 = pitman_stanley(2).unwrap();
        assert_eq!(ps2.indices, vec![vec![2, 0], vec![1, 1]]);
        assert_eq!(ps2.volume, parse_poly("a1^2/2 + a1*a2", &names).unwrap());
        assert_eq!(ps2.ehrhart, parse_poly("(a1+1)*(a1+2)/2 + (a1+1)*a2", &names).unwrap());
        assert_eq!(ps2.ehrhart.eval_int(&[1, 0]), rat(3));
        let k3 = pitman_stanley_indices(3);
        assert_eq!(k3.len(), 5);
        for i in [[3, 0, 0], [2, 1, 0], [2, 0, 1], [1, 1, 1], [1, 2, 0]] {
            assert!(k3.contains(&i.to_vec()));
        }
        for r in 1..=5 {
            assert_eq!(num_bigint::BigUint::from(pitman_stanley_indices(r).len()), catalan(r as u64));
        }
    }

    #[test]
    fn pitman_engine_agreement() {
        for r in 1..=3 {
            let rep = pitman_check(r, 3).unwrap();
            assert!(rep.passed(), "{rep:?}");
        }
    }

    #[test]
    fn a2_table() {
        let t = appendix_tables(2).unwrap();
        assert_eq!(t.rows.len(), 2);
        assert!(t.passed(), "{t:?}");
    }

    #[test]
    fn a3_table_and_continuity() {
        let t = appendix_tables(3).unwrap();
        assert_eq!(t.rows.len(), 7);
        assert!(t.passed(), "{t:?}");
        let c5 = t.rows.iter().find(|r| r.label == "c5").unwrap();
        let names = crate::poly::var_names("a", 3);
        assert_eq!(c5.volume, parse_poly("a1^2*(2*a1+3*a2+3*a3)/6", &names).unwrap());
        assert_eq!(c5.ehrhart, parse_poly("(a1+2)*(a1+1)*(2*a1+3*a2+3*a3+3)/6", &names).unwrap());
        let mut cont = continuity_on_first_axis(&t);
        cont.sort();
        assert_eq!(cont, CONTINUITY_LABELS.to_vec());
    }

    #[test]
    fn restatement_needs_epsilon() {
        let t = appendix_tables(3).unwrap();
        let reps = chamber_restatement(&t).unwrap();
        assert!(reps.iter().all(|r| r.with_epsilon), "{reps:?}");
        let c7 = reps.iter().find(|r| r.label == "c7").unwrap();
        assert!(!c7.as_written);
    }
}
