//! Object classes (P_n, F_n, exact complexes, degreewise and exact wrappers,
//! perps against a finite universe) and finite universes of objects.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::complex::{ext1_ch, ChainComplex, ComplexSes, ExtCh};
use crate::error::{Error, Result};
use crate::formats::{ObjectRef, UniverseFile};
use crate::homological::{default_flat_tests, ext1, flat_dim, proj_dim, Ext1};
use crate::module::{Module, ShortExactSequence};

/// A module or a bounded complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Object {
    Module(Module),
    Complex(ChainComplex),
}

impl Object {
    pub fn algebra(&self) -> &Arc<Algebra> {
        match self {
            Object::Module(m) => m.algebra(),
            Object::Complex(x) => x.algebra(),
        }
    }

    /// Dimension of a module, total dimension of a complex.
    pub fn size(&self) -> usize {
        match self {
            Object::Module(m) => m.dim(),
            Object::Complex(x) => x.card(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.size() == 0
    }

    pub fn zero_like(&self) -> Object {
        match self {
            Object::Module(m) => Object::Module(Module::zero(m.algebra().clone())),
            Object::Complex(x) => Object::Complex(ChainComplex::zero(x.algebra().clone())),
        }
    }

    pub fn as_complex(&self) -> Option<&ChainComplex> {
        match self {
            Object::Complex(x) => Some(x),
            Object::Module(_) => None,
        }
    }
}

/// Ext^1 group in the category the two objects live in.
#[derive(Clone, Debug)]
pub enum ExtGroup {
    Module(Box<Ext1>),
    Complex(Box<ExtCh>),
}

/// A short exact sequence of modules or of complexes.
#[derive(Clone, Debug)]
pub enum Extension {
    Module(ShortExactSequence),
    Complex(ComplexSes),
}

impl Extension {
    pub fn sub(&self) -> Object {
        match self {
            Extension::Module(s) => Object::Module(s.sub().clone()),
            Extension::Complex(s) => Object::Complex(s.sub().clone()),
        }
    }
    pub fn middle(&self) -> Object {
        match self {
            Extension::Module(s) => Object::Module(s.middle().clone()),
            Extension::Complex(s) => Object::Complex(s.middle().clone()),
        }
    }
    pub fn quotient(&self) -> Object {
        match self {
            Extension::Module(s) => Object::Module(s.quotient().clone()),
            Extension::Complex(s) => Object::Complex(s.quotient().clone()),
        }
    }
}

impl ExtGroup {
    pub fn dim(&self) -> usize {
        match self {
            ExtGroup::Module(e) => e.dim(),
            ExtGroup::Complex(e) => e.dim(),
        }
    }

    /// Every class, as an extension, starting with the split one.
    pub fn extensions(&self) -> Result<Vec<Extension>> {
        match self {
            ExtGroup::Module(e) => e
                .all_classes()
                .map(|c| e.extension(&c).map(Extension::Module))
                .collect(),
            ExtGroup::Complex(e) => e
                .all_classes()
                .map(|c| e.extension(&c).map(Extension::Complex))
                .collect(),
        }
    }
}

/// Ext^1(a, b) for two modules or two complexes.
pub fn ext_group(a: &Object, b: &Object) -> Result<ExtGroup> {
    match (a, b) {
        (Object::Module(m), Object::Module(n)) => Ok(ExtGroup::Module(Box::new(ext1(m, n)?))),
        (Object::Complex(x), Object::Complex(y)) => Ok(ExtGroup::Complex(Box::new(ext1_ch(x, y)?))),
        _ => Err(Error::UnsupportedSpec(
            "Ext between a module and a complex".into(),
        )),
    }
}

pub fn ext_dim(a: &Object, b: &Object) -> Result<usize> {
    Ok(ext_group(a, b)?.dim())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Objects X with Ext^1(s, X) = 0 for every s.
    Right,
    /// Objects X with Ext^1(X, s) = 0 for every s.
    Left,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassKind {
    All,
    Pn(usize),
    Fn(usize),
    /// Exact complexes.
    E,
    Dw(Box<ClassSpec>),
    Ex(Box<ClassSpec>),
    Perp {
        side: Side,
        universe: String,
        objects: Vec<(String, Object)>,
    },
    Intersection(Vec<ClassSpec>),
}

/// A class with an optional size budget. For complexes the budget bounds
/// every term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassSpec {
    pub kind: ClassKind,
    pub budget: Option<usize>,
}

impl ClassSpec {
    pub fn new(kind: ClassKind) -> Self {
        Self { kind, budget: None }
    }
    pub fn pn(n: usize) -> Self {
        Self::new(ClassKind::Pn(n))
    }
    pub fn fln(n: usize) -> Self {
        Self::new(ClassKind::Fn(n))
    }
    pub fn exact() -> Self {
        Self::new(ClassKind::E)
    }
    pub fn dw(inner: ClassSpec) -> Self {
        Self::new(ClassKind::Dw(Box::new(inner)))
    }
    pub fn ex(inner: ClassSpec) -> Self {
        Self::new(ClassKind::Ex(Box::new(inner)))
    }
    pub fn and(parts: Vec<ClassSpec>) -> Self {
        Self::new(ClassKind::Intersection(parts))
    }
    pub fn perp(side: Side, universe: &Universe) -> Self {
        Self::new(ClassKind::Perp {
            side,
            universe: universe.name.clone(),
            objects: universe.objects.clone(),
        })
    }
    pub fn with_budget(mut self, kappa: usize) -> Self {
        self.budget = Some(kappa);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.budget == Some(0) {
            return Err(Error::MalformedSpec("budget must be at least 1".into()));
        }
        match &self.kind {
            ClassKind::Dw(i) | ClassKind::Ex(i) => i.validate(),
            ClassKind::Intersection(v) => v.iter().try_for_each(ClassSpec::validate),
            _ => Ok(()),
        }
    }

    /// Parses `P1`, `F0`, `E`, `all`, `dw(..)`, `ex(..)`, `rperp(U)`,
    /// `lperp(U)`, intersections joined by `&`, and a trailing `@kappa`.
    /// Universe names are looked up with `universes`.
    pub fn parse_with(s: &str, universes: &dyn Fn(&str) -> Result<Universe>) -> Result<Self> {
        let mut p = Parser {
            s: s.as_bytes(),
            pos: 0,
            universes,
        };
        let spec = p.expr()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(Error::MalformedSpec(format!(
                "trailing input in class `{s}`"
            )));
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::parse_with(s, &|u| Err(Error::UnknownName(format!("universe {u}"))))
    }

    fn applies_to_complexes(&self) -> bool {
        match &self.kind {
            ClassKind::All => true,
            ClassKind::Pn(_) | ClassKind::Fn(_) => false,
            ClassKind::E | ClassKind::Dw(_) | ClassKind::Ex(_) => true,
            ClassKind::Perp { objects, .. } => objects
                .first()
                .map_or(true, |(_, o)| o.as_complex().is_some()),
            ClassKind::Intersection(v) => v.iter().all(ClassSpec::applies_to_complexes),
        }
    }
}

impl fmt::Display for ClassSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ClassKind::All => write!(f, "all")?,
            ClassKind::Pn(n) => write!(f, "P{n}")?,
            ClassKind::Fn(n) => write!(f, "F{n}")?,
            ClassKind::E => write!(f, "E")?,
            ClassKind::Dw(i) => write!(f, "dw({i})")?,
            ClassKind::Ex(i) => write!(f, "ex({i})")?,
            ClassKind::Perp {
                side: Side::Right,
                universe,
                ..
            } => write!(f, "rperp({universe})")?,
            ClassKind::Perp {
                side: Side::Left,
                universe,
                ..
            } => write!(f, "lperp({universe})")?,
            ClassKind::Intersection(v) => {
                let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
                write!(f, "({})", parts.join("&"))?
            }
        }
        if let Some(k) = self.budget {
            write!(f, "@{k}")?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    universes: &'a dyn Fn(&str) -> Result<Universe>,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, what: &str) -> Error {
        Error::MalformedSpec(format!(
            "{what} at position {} of class `{}`",
            self.pos,
            String::from_utf8_lossy(self.s)
        ))
    }

    fn number(&mut self) -> Result<usize> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("expected a number"))
    }

    fn word(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len()
            && (self.s[self.pos].is_ascii_alphanumeric() || b"_-.".contains(&self.s[self.pos]))
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.s[start..self.pos]).into_owned()
    }

    fn expr(&mut self) -> Result<ClassSpec> {
        let mut parts = vec![self.term()?];
        while self.eat(b'&') {
            parts.push(self.term()?);
        }
        let mut spec = if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            ClassSpec::and(parts)
        };
        if self.eat(b'@') {
            self.skip_ws();
            spec.budget = Some(self.number()?);
        }
        Ok(spec)
    }

    fn wrapped(&mut self) -> Result<ClassSpec> {
        if !self.eat(b'(') {
            return Err(self.err("expected `(`"));
        }
        let inner = self.expr()?;
        if !self.eat(b')') {
            return Err(self.err("expected `)`"));
        }
        Ok(inner)
    }

    fn term(&mut self) -> Result<ClassSpec> {
        self.skip_ws();
        if self.s.get(self.pos) == Some(&b'(') {
            return self.wrapped();
        }
        let w = self.word();
        match w.as_str() {
            "all" => Ok(ClassSpec::new(ClassKind::All)),
            "E" => Ok(ClassSpec::exact()),
            "dw" => Ok(ClassSpec::dw(self.wrapped()?)),
            "ex" => Ok(ClassSpec::ex(self.wrapped()?)),
            "rperp" | "lperp" => {
                if !self.eat(b'(') {
                    return Err(self.err("expected `(`"));
                }
                let name = self.word();
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                let u = (self.universes)(&name)?;
                let side = if w == "rperp" {
                    Side::Right
                } else {
                    Side::Left
                };
                Ok(ClassSpec::perp(side, &u))
            }
            _ if w.len() > 1 && (w.starts_with('P') || w.starts_with('F')) => {
                let n: usize = w[1..].parse().map_err(|_| self.err("bad class index"))?;
                Ok(if w.starts_with('P') {
                    ClassSpec::pn(n)
                } else {
                    ClassSpec::fln(n)
                })
            }
            _ => Err(self.err(&format!("unknown class `{w}`"))),
        }
    }
}

/// Verdict with human-readable witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    pub member: bool,
    pub witness: Vec<String>,
}

impl Membership {
    pub fn yes(w: impl Into<String>) -> Self {
        Self {
            member: true,
            witness: vec![w.into()],
        }
    }
    pub fn no(w: impl Into<String>) -> Self {
        Self {
            member: false,
            witness: vec![w.into()],
        }
    }
    pub fn all(parts: Vec<Membership>) -> Self {
        let member = parts.iter().all(|m| m.member);
        let witness = parts
            .into_iter()
            .filter(|m| m.member == member)
            .flat_map(|m| m.witness)
            .collect();
        Self { member, witness }
    }
}

fn module_member(m: &Module, spec: &ClassSpec) -> Result<Membership> {
    let verdict = match &spec.kind {
        ClassKind::All => Membership::yes("every module"),
        ClassKind::Pn(n) => match proj_dim(m, *n) {
            Some(d) => Membership::yes(format!("projective dimension {d}")),
            None => Membership::no(format!("projective dimension above {n}")),
        },
        ClassKind::Fn(n) => match flat_dim(m, *n, &default_flat_tests(m.algebra()))? {
            Some(d) => Membership::yes(format!("flat dimension {d}")),
            None => Membership::no(format!("flat dimension above {n}")),
        },
        ClassKind::Perp {
            side,
            universe,
            objects,
        } => perp_member(&Object::Module(m.clone()), *side, universe, objects)?,
        ClassKind::Intersection(v) => Membership::all(
            v.iter()
                .map(|c| module_member(m, c))
                .collect::<Result<_>>()?,
        ),
        ClassKind::E | ClassKind::Dw(_) | ClassKind::Ex(_) => {
            return Err(Error::UnsupportedSpec(format!(
                "{spec} applies to complexes"
            )))
        }
    };
    Ok(apply_budget(verdict, spec.budget, m.dim(), "dimension"))
}

fn apply_budget(v: Membership, budget: Option<usize>, size: usize, what: &str) -> Membership {
    match budget {
        Some(k) if size > k && v.member => {
            Membership::no(format!("{what} {size} exceeds budget {k}"))
        }
        _ => v,
    }
}

fn perp_member(
    x: &Object,
    side: Side,
    universe: &str,
    objects: &[(String, Object)],
) -> Result<Membership> {
    for (name, s) in objects {
        let d = match side {
            Side::Right => ext_dim(s, x)?,
            Side::Left => ext_dim(x, s)?,
        };
        if d != 0 {
            let cell = match side {
                Side::Right => format!("Ext^1({name}, -) has dimension {d}"),
                Side::Left => format!("Ext^1(-, {name}) has dimension {d}"),
            };
            return Ok(Membership::no(cell));
        }
    }
    Ok(Membership::yes(format!(
        "Ext^1 vanishes against all {} objects of {universe}",
        objects.len()
    )))
}

fn degreewise(x: &ChainComplex, inner: &ClassSpec) -> Result<Membership> {
    for m in x.degrees() {
        let v = module_member(&x.module(m), inner)?;
        if !v.member {
            return Ok(Membership::no(format!(
                "degree {m}: {}",
                v.witness.join("; ")
            )));
        }
    }
    Ok(Membership::yes(format!("every term is in {inner}")))
}

fn exactness(x: &ChainComplex) -> Membership {
    match x.degrees().find(|&m| !x.is_exact_at(m)) {
        Some(m) => Membership::no(format!(
            "homology of dimension {} in degree {m}",
            x.homology_dim(m)
        )),
        None => Membership::yes("exact"),
    }
}

fn complex_member(x: &ChainComplex, spec: &ClassSpec) -> Result<Membership> {
    let verdict = match &spec.kind {
        ClassKind::All => Membership::yes("every complex"),
        ClassKind::E => exactness(x),
        ClassKind::Dw(inner) => {
            if inner.applies_to_complexes() && inner.kind != ClassKind::All {
                return Err(Error::UnsupportedSpec(format!(
                    "dw needs a module class, found {inner}"
                )));
            }
            degreewise(x, inner)?
        }
        ClassKind::Ex(inner) => {
            let terms = if inner.applies_to_complexes() {
                complex_member(x, inner)?
            } else {
                degreewise(x, inner)?
            };
            Membership::all(vec![exactness(x), terms])
        }
        ClassKind::Perp {
            side,
            universe,
            objects,
        } => perp_member(&Object::Complex(x.clone()), *side, universe, objects)?,
        ClassKind::Intersection(v) => Membership::all(
            v.iter()
                .map(|c| complex_member(x, c))
                .collect::<Result<_>>()?,
        ),
        ClassKind::Pn(_) | ClassKind::Fn(_) => {
            return Err(Error::UnsupportedSpec(format!(
                "{spec} applies to modules; wrap it in dw(..)"
            )))
        }
    };
    let largest = x.dims().into_iter().max().unwrap_or(0);
    Ok(apply_budget(
        verdict,
        spec.budget,
        largest,
        "term dimension",
    ))
}

pub fn class_member(obj: &Object, spec: &ClassSpec) -> Result<Membership> {
    match obj {
        Object::Module(m) => module_member(m, spec),
        Object::Complex(x) => complex_member(x, spec),
    }
}

/// A finite named list of objects over one algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Universe {
    pub name: String,
    pub algebra: Arc<Algebra>,
    pub objects: Vec<(String, Object)>,
    /// Which constructions were used to build the universe.
    pub closure: Vec<String>,
}

impl Universe {
    pub fn new(
        name: impl Into<String>,
        algebra: Arc<Algebra>,
        objects: Vec<(String, Object)>,
    ) -> Result<Self> {
        let u = Self {
            name: name.into(),
            algebra,
            objects,
            closure: Vec::new(),
        };
        u.validate()?;
        Ok(u)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for (n, o) in &self.objects {
            if !seen.insert(n) {
                return Err(Error::MalformedSpec(format!("duplicate object name {n}")));
            }
            if !o.algebra().same_table(&self.algebra) {
                return Err(Error::AlgebraMismatch);
            }
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Object> {
        self.objects.iter().find(|(n, _)| n == name).map(|(_, o)| o)
    }

    pub fn names(&self) -> Vec<String> {
        self.objects.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn from_file(name: impl Into<String>, file: &UniverseFile) -> Result<Self> {
        let alg = file.algebra.resolve()?;
        let objects = file
            .objects
            .iter()
            .map(|e| {
                let o = match &e.object {
                    ObjectRef::Module(m) => Object::Module(m.resolve(&alg)?),
                    ObjectRef::Complex(c) => Object::Complex(c.resolve(&alg)?),
                    ObjectRef::Disk { module, degree } => {
                        Object::Complex(ChainComplex::disk(&module.resolve(&alg)?, *degree))
                    }
                    ObjectRef::Sphere { module, degree } => {
                        Object::Complex(ChainComplex::sphere(&module.resolve(&alg)?, *degree))
                    }
                };
                Ok((e.name.clone(), o))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut u = Self::new(name, alg, objects)?;
        u.closure = file.closure.clone();
        Ok(u)
    }

    pub fn sub(&self, name: impl Into<String>, keep: &[String]) -> Universe {
        Universe {
            name: name.into(),
            algebra: self.algebra.clone(),
            objects: self
                .objects
                .iter()
                .filter(|(n, _)| keep.contains(n))
                .cloned()
                .collect(),
            closure: self.closure.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;

    #[test]
    fn parse_round_trip() {
        for s in ["P1", "F0@3", "ex(dw(P0))", "dw(P1)@4", "(E&dw(P2))"] {
            let c = ClassSpec::parse(s).unwrap();
            assert_eq!(ClassSpec::parse(&c.to_string()).unwrap(), c);
        }
        assert!(ClassSpec::parse("Q1").is_err());
        assert!(ClassSpec::parse("P1@0").is_err());
    }

    #[test]
    fn simple_memberships() {
        let sb = Object::Module(library::module("T2F2", "S_b").unwrap());
        assert!(!class_member(&sb, &ClassSpec::pn(0)).unwrap().member);
        assert!(class_member(&sb, &ClassSpec::pn(1)).unwrap().member);
        let a = Module::regular(library::algebra("T2F2").unwrap());
        assert!(
            class_member(&Object::Module(a.clone()), &ClassSpec::pn(0))
                .unwrap()
                .member
        );
        let d = Object::Complex(ChainComplex::disk(&a, 0));
        assert!(
            class_member(&d, &ClassSpec::parse("ex(dw(P0))").unwrap())
                .unwrap()
                .member
        );
        assert!(class_member(&sb, &ClassSpec::exact()).is_err());
    }
}
