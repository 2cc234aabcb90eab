//! Bundled test algebras and modules.

use std::sync::Arc;

use crate::algebra::{Algebra, AlgebraSpec};
use crate::class::{Object, Universe};
use crate::error::{Error, Result};
use crate::formats::{ModuleLibraryFile, UniverseFile};
use crate::module::Module;

const ALGEBRAS: &[(&str, &str)] = &[
    ("F2", include_str!("../data/algebras/F2.json")),
    ("T2F2", include_str!("../data/algebras/T2F2.json")),
    ("T2F3", include_str!("../data/algebras/T2F3.json")),
    ("NAK3", include_str!("../data/algebras/NAK3.json")),
];

const MODULES: &[(&str, &str)] = &[
    ("T2F2", include_str!("../data/modules/T2F2.json")),
    ("NAK3", include_str!("../data/modules/NAK3.json")),
];

const UNIVERSES: &[(&str, &str)] = &[("T2F2", include_str!("../data/universes/T2F2.json"))];

pub fn algebra_names() -> impl Iterator<Item = &'static str> {
    ALGEBRAS.iter().map(|(n, _)| *n)
}

pub fn algebra(name: &str) -> Result<Arc<Algebra>> {
    let (_, text) = ALGEBRAS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::UnknownName(format!("algebra {name}")))?;
    let spec: AlgebraSpec = serde_json::from_str(text)?;
    Ok(Arc::new(Algebra::load(&spec)?.with_name(name)))
}

fn module_library(alg: &str) -> Result<ModuleLibraryFile> {
    let (_, text) = MODULES
        .iter()
        .find(|(n, _)| *n == alg)
        .ok_or_else(|| Error::UnknownName(format!("no bundled modules for algebra {alg}")))?;
    Ok(serde_json::from_str(text)?)
}

pub fn module_names(alg: &str) -> Result<Vec<String>> {
    Ok(module_library(alg)?.into_keys().collect())
}

pub fn module(alg: &str, name: &str) -> Result<Module> {
    let lib = module_library(alg)?;
    let file = lib
        .get(name)
        .ok_or_else(|| Error::UnknownName(format!("module {name} over {alg}")))?;
    file.to_module()
}

/// Every bundled module over the named algebra, in name order.
pub fn modules(alg: &str) -> Result<Vec<(String, Module)>> {
    module_library(alg)?
        .into_iter()
        .map(|(n, f)| f.to_module().map(|m| (n, m)))
        .collect()
}

pub fn universe_names() -> impl Iterator<Item = &'static str> {
    UNIVERSES.iter().map(|(n, _)| *n)
}

/// A bundled universe of complexes.
pub fn universe(name: &str) -> Result<Universe> {
    let (_, text) = UNIVERSES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::UnknownName(format!("universe {name}")))?;
    let file: UniverseFile = serde_json::from_str(text)?;
    Universe::from_file(name, &file)
}

/// The bundled modules over an algebra together with the regular module `A`.
pub fn module_universe(alg: &str) -> Result<Universe> {
    let a = algebra(alg)?;
    let mut objects: Vec<(String, Object)> = modules(alg)?
        .into_iter()
        .map(|(n, m)| (n, Object::Module(m)))
        .collect();
    objects.push(("A".into(), Object::Module(Module::regular(a.clone()))));
    Universe::new(format!("{alg}-modules"), a, objects)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_algebras_load_and_opposites_are_involutive() {
        for name in algebra_names() {
            let a = algebra(name).unwrap();
            let op = a.opposite();
            op.validate().unwrap();
            assert!(op.opposite().same_table(&a));
        }
    }

    #[test]
    fn bundled_modules_load() {
        for alg in ["T2F2", "NAK3"] {
            assert!(!modules(alg).unwrap().is_empty());
        }
    }
}
