//! Exact verification of the generator commutator tables.
//!
//! Expected right-hand sides are encoded as published, with each factor 2
//! written as the symbol `hbar`; mismatches are reported, never normalized.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::coef::{cr, Coef};
use super::contraction::{contract, prefactor, rescale, Frame};
use super::diffop::{DiffOp, Var};
use super::generators::{boost, make_generator, GeneratorId, GeneratorKind, Realization};
use super::WeylError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TableId {
    #[serde(rename = "left_right_59")]
    LeftRight,
    #[serde(rename = "mixed_61")]
    Mixed,
    #[serde(rename = "boost_time_62")]
    BoostTime,
    #[serde(rename = "classical_63")]
    Classical,
    #[serde(rename = "tilde_basis")]
    TildeBasis,
}

impl TableId {
    pub const ALL: [TableId; 5] = [TableId::LeftRight, TableId::Mixed, TableId::BoostTime, TableId::Classical, TableId::TildeBasis];

    pub fn name(self) -> &'static str {
        match self {
            TableId::LeftRight => "left_right_59",
            TableId::Mixed => "mixed_61",
            TableId::BoostTime => "boost_time_62",
            TableId::Classical => "classical_63",
            TableId::TildeBasis => "tilde_basis",
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TableId {
    type Err = WeylError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TableId::ALL.into_iter().find(|t| t.name() == s).ok_or_else(|| WeylError::InvalidId(format!("unknown table {s}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableEntry {
    pub table: String,
    pub entry: String,
    pub status: Status,
    pub expected: String,
    pub computed: String,
}

struct Report {
    table: TableId,
    entries: Vec<TableEntry>,
}

impl Report {
    fn check(&mut self, entry: String, computed: DiffOp, expected: DiffOp) {
        let status = if computed == expected { Status::Pass } else { Status::Fail };
        self.entries.push(TableEntry {
            table: self.table.name().into(),
            entry,
            status,
            expected: expected.to_string(),
            computed: computed.to_string(),
        });
    }
}

fn delta(i: usize, j: usize) -> i64 {
    i64::from(i == j)
}

fn i_hbar() -> Coef {
    Coef::i().mul(&Coef::hbar())
}

fn realization_tag(r: Realization) -> &'static str {
    match r {
        Realization::Left => "L",
        Realization::Right => "R",
        Realization::Tilde => "tilde",
        Realization::Multiplicative => "M",
    }
}

/// Generator family in one realization, with `Rotation(i, i)` read as zero.
struct Family {
    n: usize,
    r: Realization,
}

impl Family {
    fn get(&self, kind: GeneratorKind) -> Result<DiffOp, WeylError> {
        if let GeneratorKind::Rotation(i, j) = kind {
            if i == j {
                return Ok(DiffOp::zero(self.n));
            }
        }
        make_generator(self.n, GeneratorId::new(kind, self.r))
    }

    fn rot(&self, i: usize, j: usize) -> Result<DiffOp, WeylError> {
        self.get(GeneratorKind::Rotation(i, j))
    }

    fn px(&self, i: usize) -> Result<DiffOp, WeylError> {
        self.get(GeneratorKind::TranslationP(i))
    }

    fn mx(&self, i: usize) -> Result<DiffOp, WeylError> {
        self.get(GeneratorKind::TranslationX(i))
    }
}

/// `c1 A + c2 B` with integer Kronecker weights, times `scale`.
fn combo(n: usize, scale: &Coef, parts: &[(i64, DiffOp)]) -> Result<DiffOp, WeylError> {
    let mut acc = DiffOp::zero(n);
    for (w, op) in parts {
        if *w != 0 {
            acc = acc.add(&op.scale(&Coef::scalar(cr(*w, 0))))?;
        }
    }
    Ok(acc.scale(scale))
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            v.push((i, j));
        }
    }
    v
}

/// Operators and labels needed for the rotation-translation rows of one realization.
struct RotationRows<'a> {
    n: usize,
    tag: &'a str,
    rot: &'a dyn Fn(usize, usize) -> Result<DiffOp, WeylError>,
    px: &'a dyn Fn(usize) -> Result<DiffOp, WeylError>,
    mx: &'a dyn Fn(usize) -> Result<DiffOp, WeylError>,
}

/// `[w^ij, w^hk]`, `[w^ij, -x^k]`, `[w^ij, p^k]` with sign `sign * i hbar`.
fn rotation_rows(rep: &mut Report, rows: &RotationRows, sign: i64) -> Result<(), WeylError> {
    let n = rows.n;
    let s = i_hbar().mul(&Coef::integer(sign));
    for &(i, j) in &pairs(n) {
        for &(h, k) in &pairs(n) {
            let computed = (rows.rot)(i, j)?.commutator(&(rows.rot)(h, k)?)?;
            let expected = combo(
                n,
                &s,
                &[
                    (delta(j, k), (rows.rot)(i, h)?),
                    (-delta(j, h), (rows.rot)(i, k)?),
                    (delta(i, h), (rows.rot)(j, k)?),
                    (-delta(i, k), (rows.rot)(j, h)?),
                ],
            )?;
            rep.check(format!("{}: [G_omega^{{{}{}}}, G_omega^{{{}{}}}]", rows.tag, i + 1, j + 1, h + 1, k + 1), computed, expected);
        }
        for k in 0..n {
            let computed = (rows.rot)(i, j)?.commutator(&(rows.mx)(k)?)?;
            let expected = combo(n, &s, &[(delta(j, k), (rows.mx)(i)?), (-delta(i, k), (rows.mx)(j)?)])?;
            rep.check(format!("{}: [G_omega^{{{}{}}}, G_-x^{}]", rows.tag, i + 1, j + 1, k + 1), computed, expected);
            let computed = (rows.rot)(i, j)?.commutator(&(rows.px)(k)?)?;
            let expected = combo(n, &s, &[(delta(j, k), (rows.px)(i)?), (-delta(i, k), (rows.px)(j)?)])?;
            rep.check(format!("{}: [G_omega^{{{}{}}}, G_p^{}]", rows.tag, i + 1, j + 1, k + 1), computed, expected);
        }
    }
    Ok(())
}

/// Translation rows: `[p^i, -x^j] = sign i hbar delta central`, `[p, p] = [-x, -x] = 0`.
fn translation_rows(
    rep: &mut Report,
    n: usize,
    tag: &str,
    px: &dyn Fn(usize) -> Result<DiffOp, WeylError>,
    mx: &dyn Fn(usize) -> Result<DiffOp, WeylError>,
    central: &DiffOp,
    sign: i64,
) -> Result<(), WeylError> {
    for i in 0..n {
        for j in 0..n {
            let computed = px(i)?.commutator(&mx(j)?)?;
            let expected = central.scale(&i_hbar().mul(&Coef::integer(sign * delta(i, j))));
            rep.check(format!("{tag}: [G_p^{}, G_-x^{}]", i + 1, j + 1), computed, expected);
            rep.check(format!("{tag}: [G_p^{}, G_p^{}]", i + 1, j + 1), px(i)?.commutator(&px(j)?)?, DiffOp::zero(n));
            rep.check(format!("{tag}: [G_-x^{}, G_-x^{}]", i + 1, j + 1), mx(i)?.commutator(&mx(j)?)?, DiffOp::zero(n));
        }
    }
    Ok(())
}

fn all_kinds(n: usize) -> Vec<GeneratorKind> {
    let mut v = Vec::new();
    for i in 0..n {
        v.push(GeneratorKind::TranslationX(i));
        v.push(GeneratorKind::TranslationP(i));
    }
    for (i, j) in pairs(n) {
        v.push(GeneratorKind::Rotation(i, j));
    }
    v.push(GeneratorKind::Time);
    v.push(GeneratorKind::Theta);
    v
}

fn kind_label(kind: GeneratorKind) -> String {
    match kind {
        GeneratorKind::TranslationX(i) => format!("G_-x^{}", i + 1),
        GeneratorKind::TranslationP(i) => format!("G_p^{}", i + 1),
        GeneratorKind::Rotation(i, j) => format!("G_omega^{{{}{}}}", i + 1, j + 1),
        GeneratorKind::Time => "G_t".into(),
        GeneratorKind::Theta => "G_theta".into(),
    }
}

fn left_right(rep: &mut Report, n: usize) -> Result<(), WeylError> {
    for (r, sign) in [(Realization::Left, 1), (Realization::Right, -1), (Realization::Tilde, 1)] {
        let fam = Family { n, r };
        let tag = realization_tag(r);
        let rows = RotationRows { n, tag, rot: &|i, j| fam.rot(i, j), px: &|i| fam.px(i), mx: &|i| fam.mx(i) };
        rotation_rows(rep, &rows, sign)?;
        let central = fam.get(GeneratorKind::Theta)?;
        translation_rows(rep, n, tag, &|i| fam.px(i), &|i| fam.mx(i), &central, sign)?;
        for kind in all_kinds(n) {
            let computed = central.commutator(&fam.get(kind)?)?;
            rep.check(format!("{tag}: [G_theta, {}]", kind_label(kind)), computed, DiffOp::zero(n));
        }
    }
    // [X^L_i, P^L_j] = i hbar delta_ij
    let left = Family { n, r: Realization::Left };
    for i in 0..n {
        for j in 0..n {
            let computed = left.px(i)?.commutator(&left.mx(j)?)?;
            let expected = DiffOp::identity(n).scale(&i_hbar().mul(&Coef::integer(delta(i, j))));
            rep.check(format!("[X^L_{}, P^L_{}]", i + 1, j + 1), computed, expected);
        }
    }
    let right = Family { n, r: Realization::Right };
    for a in all_kinds(n) {
        for b in all_kinds(n) {
            let computed = left.get(a)?.commutator(&right.get(b)?)?;
            rep.check(format!("[{}^L, {}^R]", kind_label(a), kind_label(b)), computed, DiffOp::zero(n));
        }
    }
    Ok(())
}

/// Rows between multiplicative generators `m` and tilde generators `t`.
struct MixedSet<'a> {
    n: usize,
    tag: &'a str,
    m_rot: &'a dyn Fn(usize, usize) -> Result<DiffOp, WeylError>,
    m_px: &'a dyn Fn(usize) -> Result<DiffOp, WeylError>,
    m_mx: &'a dyn Fn(usize) -> Result<DiffOp, WeylError>,
    t_rot: &'a dyn Fn(usize, usize) -> Result<DiffOp, WeylError>,
    t_px: &'a dyn Fn(usize) -> Result<DiffOp, WeylError>,
    t_mx: &'a dyn Fn(usize) -> Result<DiffOp, WeylError>,
}

fn mixed_rows(rep: &mut Report, s: &MixedSet) -> Result<(), WeylError> {
    let n = s.n;
    let plus = i_hbar();
    let minus = i_hbar().mul(&Coef::integer(-1));
    for &(i, j) in &pairs(n) {
        for &(h, k) in &pairs(n) {
            let computed = (s.m_rot)(i, j)?.commutator(&(s.t_rot)(h, k)?)?;
            let expected = combo(
                n,
                &plus,
                &[
                    (delta(j, k), (s.m_rot)(i, h)?),
                    (-delta(j, h), (s.m_rot)(i, k)?),
                    (delta(i, h), (s.m_rot)(j, k)?),
                    (-delta(i, k), (s.m_rot)(j, h)?),
                ],
            )?;
            rep.check(format!("{}[G_omega^{{{}{}}}, ~G_omega^{{{}{}}}]", s.tag, i + 1, j + 1, h + 1, k + 1), computed, expected);
        }
        for k in 0..n {
            let sel = |f: &dyn Fn(usize) -> Result<DiffOp, WeylError>| -> Result<DiffOp, WeylError> {
                combo(n, &minus, &[(delta(j, k), f(i)?), (-delta(i, k), f(j)?)])
            };
            rep.check(
                format!("{}[G_omega^{{{}{}}}, ~G_-x^{}]", s.tag, i + 1, j + 1, k + 1),
                (s.m_rot)(i, j)?.commutator(&(s.t_mx)(k)?)?,
                sel(s.m_mx)?,
            );
            rep.check(
                format!("{}[G_omega^{{{}{}}}, ~G_p^{}]", s.tag, i + 1, j + 1, k + 1),
                (s.m_rot)(i, j)?.commutator(&(s.t_px)(k)?)?,
                sel(s.m_px)?,
            );
            rep.check(
                format!("{}[~G_omega^{{{}{}}}, G_-x^{}]", s.tag, i + 1, j + 1, k + 1),
                (s.t_rot)(i, j)?.commutator(&(s.m_mx)(k)?)?,
                sel(s.m_mx)?,
            );
            rep.check(
                format!("{}[~G_omega^{{{}{}}}, G_p^{}]", s.tag, i + 1, j + 1, k + 1),
                (s.t_rot)(i, j)?.commutator(&(s.m_px)(k)?)?,
                sel(s.m_px)?,
            );
        }
    }
    for i in 0..n {
        for j in 0..n {
            let d = delta(i, j);
            let id = DiffOp::identity(n);
            rep.check(
                format!("{}[G_p^{}, ~G_-x^{}]", s.tag, i + 1, j + 1),
                (s.m_px)(i)?.commutator(&(s.t_mx)(j)?)?,
                id.scale(&plus.mul(&Coef::integer(d))),
            );
            rep.check(
                format!("{}[G_-x^{}, ~G_p^{}]", s.tag, i + 1, j + 1),
                (s.m_mx)(i)?.commutator(&(s.t_px)(j)?)?,
                id.scale(&minus.mul(&Coef::integer(d))),
            );
            rep.check(
                format!("{}[G_p^{}, ~G_p^{}]", s.tag, i + 1, j + 1),
                (s.m_px)(i)?.commutator(&(s.t_px)(j)?)?,
                DiffOp::zero(n),
            );
            rep.check(
                format!("{}[G_-x^{}, ~G_-x^{}]", s.tag, i + 1, j + 1),
                (s.m_mx)(i)?.commutator(&(s.t_mx)(j)?)?,
                DiffOp::zero(n),
            );
        }
    }
    Ok(())
}

fn coord(n: usize, v: Var) -> DiffOp {
    DiffOp::coord(n, v)
}

fn der(n: usize, v: Var) -> DiffOp {
    DiffOp::deriv(n, v)
}

fn prod(a: &DiffOp, b: &DiffOp) -> Result<DiffOp, WeylError> {
    a.compose(b)
}

/// Published left rotation `(x_i p_j - i x_i d_xj + i p_j d_pi + d_xj d_pi) - (i <-> j)` with 2 -> hbar.
fn published_left_rotation(n: usize, i: usize, j: usize) -> Result<DiffOp, WeylError> {
    let half = Coef::hbar().mul(&Coef::ratio(1, 2));
    let one = |a: usize, b: usize| -> Result<DiffOp, WeylError> {
        let t1 = prod(&coord(n, Var::X(a)), &coord(n, Var::P(b)))?;
        let t2 = prod(&coord(n, Var::X(a)), &der(n, Var::X(b)))?.scale(&Coef::i().mul(&half).mul(&Coef::integer(-1)));
        let t3 = prod(&coord(n, Var::P(b)), &der(n, Var::P(a)))?.scale(&Coef::i().mul(&half));
        let t4 = prod(&der(n, Var::X(b)), &der(n, Var::P(a)))?.scale(&half.mul(&half));
        t1.add(&t2)?.add(&t3)?.add(&t4)
    };
    one(i, j)?.sub(&one(j, i)?)
}

/// Published tilde rotation `-2i (x_i d_xj - p_j d_pi) - (i <-> j)` with 2 -> hbar.
fn published_tilde_rotation(n: usize, i: usize, j: usize) -> Result<DiffOp, WeylError> {
    let one = |a: usize, b: usize| -> Result<DiffOp, WeylError> {
        prod(&coord(n, Var::X(a)), &der(n, Var::X(b)))?.sub(&prod(&coord(n, Var::P(b)), &der(n, Var::P(a)))?)
    };
    Ok(one(i, j)?.sub(&one(j, i)?)?.scale(&i_hbar().mul(&Coef::integer(-1))))
}

fn mixed(rep: &mut Report, n: usize) -> Result<(), WeylError> {
    let m = Family { n, r: Realization::Multiplicative };
    let t = Family { n, r: Realization::Tilde };
    let set = MixedSet {
        n,
        tag: "",
        m_rot: &|i, j| m.rot(i, j),
        m_px: &|i| m.px(i),
        m_mx: &|i| m.mx(i),
        t_rot: &|i, j| t.rot(i, j),
        t_px: &|i| t.px(i),
        t_mx: &|i| t.mx(i),
    };
    mixed_rows(rep, &set)?;
    let left = Family { n, r: Realization::Left };
    for (i, j) in pairs(n) {
        rep.check(format!("form: G_omega^{{{}{}}}*", i + 1, j + 1), left.rot(i, j)?, published_left_rotation(n, i, j)?);
        rep.check(format!("form: ~G_omega^{{{}{}}}", i + 1, j + 1), t.rot(i, j)?, published_tilde_rotation(n, i, j)?);
    }
    Ok(())
}

fn time_family(n: usize, r: Realization) -> Result<DiffOp, WeylError> {
    make_generator(n, GeneratorId::new(GeneratorKind::Time, r))
}

fn boost_time(rep: &mut Report, n: usize) -> Result<(), WeylError> {
    let ihm = i_hbar().mul(&Coef::inv_mass());
    for (r, sign) in [(Realization::Left, 1), (Realization::Right, -1), (Realization::Tilde, 1)] {
        let fam = Family { n, r };
        let tag = realization_tag(r);
        let gt = time_family(n, r)?;
        for i in 0..n {
            let computed = fam.px(i)?.commutator(&gt)?;
            let expected = fam.mx(i)?.scale(&ihm.mul(&Coef::integer(sign)));
            rep.check(format!("{tag}: [G_p^{}, G_t]", i + 1), computed, expected);
        }
        for kind in all_kinds(n) {
            if matches!(kind, GeneratorKind::TranslationP(_) | GeneratorKind::Time) {
                continue;
            }
            rep.check(format!("{tag}: [G_t, {}]", kind_label(kind)), gt.commutator(&fam.get(kind)?)?, DiffOp::zero(n));
        }
    }
    let mut published = DiffOp::zero(n);
    for i in 0..n {
        published = published.add(&prod(&coord(n, Var::P(i)), &der(n, Var::X(i)))?)?;
    }
    let published = published.scale(&ihm.mul(&Coef::integer(-1)));
    rep.check("form: ~G_t".into(), time_family(n, Realization::Tilde)?, published);
    let left = Family { n, r: Realization::Left };
    let gt = time_family(n, Realization::Left)?;
    for i in 0..n {
        let computed = boost(n, i, Realization::Left)?.commutator(&gt)?;
        rep.check(format!("L: [K_{}, G_t]", i + 1), computed, left.mx(i)?.scale(&i_hbar()));
    }
    Ok(())
}

/// Contracted tilde and multiplicative generators in classical coordinates.
struct ClassicalSet {
    n: usize,
}

impl ClassicalSet {
    fn tilde(&self, kind: GeneratorKind) -> Result<DiffOp, WeylError> {
        if let GeneratorKind::Rotation(i, j) = kind {
            if i == j {
                return Ok(DiffOp::zero(self.n));
            }
        }
        let op = make_generator(self.n, GeneratorId::new(kind, Realization::Tilde))?;
        let pre = match kind {
            GeneratorKind::TranslationP(_) | GeneratorKind::TranslationX(_) => prefactor::tilde_translation(),
            _ => prefactor::half_hbar(),
        };
        contract(&op, Frame::Classical, &pre)
    }

    fn mult(&self, kind: GeneratorKind) -> Result<DiffOp, WeylError> {
        if let GeneratorKind::Rotation(i, j) = kind {
            if i == j {
                return Ok(DiffOp::zero(self.n));
            }
        }
        let op = make_generator(self.n, GeneratorId::new(kind, Realization::Multiplicative))?;
        let pre = match kind {
            GeneratorKind::TranslationP(_) | GeneratorKind::TranslationX(_) => prefactor::translation(),
            GeneratorKind::Theta => Coef::one(),
            _ => prefactor::quadratic(),
        };
        contract(&op, Frame::Classical, &pre)
    }
}

fn classical(rep: &mut Report, n: usize) -> Result<(), WeylError> {
    let c = ClassicalSet { n };
    let t_rot = |i, j| c.tilde(GeneratorKind::Rotation(i, j));
    let t_px = |i| c.tilde(GeneratorKind::TranslationP(i));
    let t_mx = |i| c.tilde(GeneratorKind::TranslationX(i));
    let m_rot = |i, j| c.mult(GeneratorKind::Rotation(i, j));
    let m_px = |i| c.mult(GeneratorKind::TranslationP(i));
    let m_mx = |i| c.mult(GeneratorKind::TranslationX(i));
    let t_time = c.tilde(GeneratorKind::Time)?;
    let ih = i_hbar();
    let ihm = ih.mul(&Coef::inv_mass());

    // published forms
    for (i, j) in pairs(n) {
        rep.check(format!("form: ~G^c_omega^{{{}{}}}", i + 1, j + 1), t_rot(i, j)?, published_tilde_rotation(n, i, j)?);
        let m = prod(&coord(n, Var::X(i)), &coord(n, Var::P(j)))?.sub(&prod(&coord(n, Var::X(j)), &coord(n, Var::P(i)))?)?;
        rep.check(format!("form: G^c_omega^{{{}{}}}", i + 1, j + 1), m_rot(i, j)?, m);
    }
    let mut p_dx = DiffOp::zero(n);
    let mut p2 = DiffOp::zero(n);
    for i in 0..n {
        p_dx = p_dx.add(&prod(&coord(n, Var::P(i)), &der(n, Var::X(i)))?)?;
        p2 = p2.add(&prod(&coord(n, Var::P(i)), &coord(n, Var::P(i)))?)?;
    }
    rep.check("form: ~G^c_t".into(), t_time.clone(), p_dx.scale(&ihm.mul(&Coef::integer(-1))));
    rep.check("form: G^c_t".into(), c.mult(GeneratorKind::Time)?, p2.scale(&Coef::inv_mass()));
    let eps2 = Coef::integer(2).mul(&ih).mul(&Coef::eps());
    for i in 0..n {
        rep.check(format!("form: ~G_p^{}c", i + 1), t_px(i)?, der(n, Var::P(i)).scale(&ih));
        rep.check(format!("form: ~G_-x^{}c", i + 1), t_mx(i)?, der(n, Var::X(i)).scale(&ih));
        rep.check(format!("form: G^c_p^{}", i + 1), m_px(i)?, coord(n, Var::X(i)));
        rep.check(format!("form: G^c_-x^{}", i + 1), m_mx(i)?, coord(n, Var::P(i)));
        let tilde_p = make_generator(n, GeneratorId::new(GeneratorKind::TranslationP(i), Realization::Tilde))?;
        let tilde_x = make_generator(n, GeneratorId::new(GeneratorKind::TranslationX(i), Realization::Tilde))?;
        let pre = prefactor::translation();
        rep.check(
            format!("form: (sqrt(hbar)/k) ~G_p^{}", i + 1),
            rescale(&tilde_p, Frame::Classical, &pre)?,
            der(n, Var::P(i)).scale(&eps2),
        );
        rep.check(
            format!("form: (sqrt(hbar)/k) ~G_-x^{}", i + 1),
            rescale(&tilde_x, Frame::Classical, &pre)?,
            der(n, Var::X(i)).scale(&eps2),
        );
    }

    // tilde set, factors of 2 replaced by hbar
    let rows = RotationRows { n, tag: "c tilde", rot: &t_rot, px: &t_px, mx: &t_mx };
    rotation_rows(rep, &rows, 1)?;
    translation_rows(rep, n, "c tilde", &t_px, &t_mx, &DiffOp::zero(n), 1)?;
    for i in 0..n {
        rep.check(format!("c tilde: [G_p^{}, G_t]", i + 1), t_px(i)?.commutator(&t_time)?, t_mx(i)?.scale(&ihm));
        rep.check(format!("c tilde: [G_t, G_-x^{}]", i + 1), t_time.commutator(&t_mx(i)?)?, DiffOp::zero(n));
    }
    for (i, j) in pairs(n) {
        rep.check(format!("c tilde: [G_t, G_omega^{{{}{}}}]", i + 1, j + 1), t_time.commutator(&t_rot(i, j)?)?, DiffOp::zero(n));
    }

    // multiplicative classical operators against the tilde set
    let set = MixedSet { n, tag: "c: ", m_rot: &m_rot, m_px: &m_px, m_mx: &m_mx, t_rot: &t_rot, t_px: &t_px, t_mx: &t_mx };
    mixed_rows(rep, &set)
}

fn tilde_basis(rep: &mut Report, n: usize) -> Result<(), WeylError> {
    let t = Family { n, r: Realization::Tilde };
    for i in 0..n {
        rep.check(format!("form: ~p_{} = 2i d_x", i + 1), t.mx(i)?, der(n, Var::X(i)).scale(&i_hbar()));
        rep.check(format!("form: ~x_{} = 2i d_p", i + 1), t.px(i)?, der(n, Var::P(i)).scale(&i_hbar()));
        for j in 0..n {
            let want = DiffOp::identity(n).scale(&i_hbar().mul(&Coef::integer(-delta(i, j))));
            rep.check(format!("[x_{}, ~p_{}]", i + 1, j + 1), coord(n, Var::X(i)).commutator(&t.mx(j)?)?, want.clone());
            rep.check(format!("[p_{}, ~x_{}]", i + 1, j + 1), coord(n, Var::P(i)).commutator(&t.px(j)?)?, want);
        }
    }
    Ok(())
}

/// Recomputes every entry of a table in dimension `n` (rotation rows need `n >= 2`).
pub fn verify_table(table: TableId, n: usize) -> Result<Vec<TableEntry>, WeylError> {
    if n == 0 {
        return Err(WeylError::InvalidId("dimension 0".into()));
    }
    let mut rep = Report { table, entries: Vec::new() };
    match table {
        TableId::LeftRight => left_right(&mut rep, n)?,
        TableId::Mixed => mixed(&mut rep, n)?,
        TableId::BoostTime => boost_time(&mut rep, n)?,
        TableId::Classical => classical(&mut rep, n)?,
        TableId::TildeBasis => tilde_basis(&mut rep, n)?,
    }
    Ok(rep.entries)
}
