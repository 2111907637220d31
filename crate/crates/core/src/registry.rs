//! Name-keyed registries of interchangeable algorithm implementations.
//!
//! Pfaffian algorithms and circuit evaluators are each exposed behind a trait
//! object and looked up by name at runtime (CLI flags, config files).

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

/// Common surface of every registered strategy.
pub trait Strategy: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown {kind} `{name}` (known: {})", known.join(", "))]
pub struct UnknownStrategy {
    pub kind: &'static str,
    pub name: String,
    pub known: Vec<String>,
}

pub struct Registry<T: ?Sized> {
    kind: &'static str,
    entries: BTreeMap<&'static str, Arc<T>>,
}

impl<T: ?Sized + Strategy> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Registry {
            kind,
            entries: BTreeMap::new(),
        }
    }

    /// Registers a strategy, replacing any previous one with the same name.
    pub fn register(&mut self, strategy: Arc<T>) -> &mut Self {
        self.entries.insert(strategy.name(), strategy);
        self
    }

    pub fn get(&self, name: &str) -> Result<Arc<T>, UnknownStrategy> {
        self.entries
            .get(name)
            .cloned()
            .ok_or_else(|| UnknownStrategy {
                kind: self.kind,
                name: name.to_string(),
                known: self.names().into_iter().map(String::from).collect(),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Arc<T>> {
        self.entries.values()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Dummy(&'static str);

    impl Strategy for Dummy {
        fn name(&self) -> &'static str {
            self.0
        }
        fn description(&self) -> &'static str {
            "dummy"
        }
    }

    #[test]
    fn lookup_and_unknown_names() {
        let mut reg: Registry<dyn Strategy> = Registry::new("dummy");
        reg.register(Arc::new(Dummy("b")))
            .register(Arc::new(Dummy("a")));
        assert_eq!(reg.names(), vec!["a", "b"]);
        assert_eq!(reg.get("a").unwrap().name(), "a");
        let err = reg.get("zz").err().unwrap();
        assert_eq!(err.known, vec!["a".to_string(), "b".to_string()]);
        assert!(err.to_string().contains("unknown dummy `zz`"));
    }
}
