//! Name-keyed registries for interchangeable strategies.
//!
//! Every pluggable family in the crate (function generators, embedders,
//! kernels, query strategies) is a trait object that reports its own name.
//! A [`Registry`] owns one family and resolves names chosen at runtime by the
//! experiment config or the command line.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Implemented by every registrable strategy.
pub trait Named {
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str {
        ""
    }
}

pub struct Registry<T: ?Sized> {
    kind: &'static str,
    entries: Vec<Arc<T>>,
}

impl<T: ?Sized + Named> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Self {
            kind,
            entries: Vec::new(),
        }
    }

    pub fn kind(&self) -> &'static str {
        self.kind
    }

    pub fn register(&mut self, entry: Arc<T>) -> Result<()> {
        if self.entries.iter().any(|e| e.name() == entry.name()) {
            return Err(Error::DuplicateStrategy {
                kind: self.kind,
                name: entry.name().to_string(),
            });
        }
        self.entries.push(entry);
        Ok(())
    }

    /// Builder-style registration for the built-in tables. Panics on a
    /// duplicate name, which can only be a programming error there.
    pub fn with(mut self, entry: Arc<T>) -> Self {
        self.register(entry).expect("duplicate built-in strategy");
        self
    }

    pub fn get(&self, name: &str) -> Result<Arc<T>> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .cloned()
            .ok_or_else(|| Error::UnknownStrategy {
                kind: self.kind,
                name: name.to_string(),
                available: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Arc<T>> {
        self.entries.iter()
    }
}

impl<T: ?Sized + Named> fmt::Debug for Registry<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Registry")
            .field("kind", &self.kind)
            .field("entries", &self.names())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    trait Greeter: Named {
        fn greet(&self) -> String;
    }

    struct Hello;
    impl Named for Hello {
        fn name(&self) -> &'static str {
            "hello"
        }
    }
    impl Greeter for Hello {
        fn greet(&self) -> String {
            "hello".into()
        }
    }

    #[test]
    fn lookup_and_duplicates() {
        let mut reg: Registry<dyn Greeter> = Registry::new("greeter");
        reg.register(Arc::new(Hello)).unwrap();
        assert_eq!(reg.get("hello").unwrap().greet(), "hello");
        assert!(matches!(
            reg.register(Arc::new(Hello)),
            Err(Error::DuplicateStrategy { .. })
        ));
        let err = reg.get("nope").err().expect("unknown name").to_string();
        assert!(err.contains("hello"), "{err}");
    }
}
