use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Named implementations of one strategy trait, selected at runtime.
pub struct Registry<T: ?Sized> {
    kind: &'static str,
    entries: BTreeMap<&'static str, Box<T>>,
}

impl<T: ?Sized> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Registry {
            kind,
            entries: BTreeMap::new(),
        }
    }

    /// Later registrations under the same name replace earlier ones.
    pub fn register(&mut self, name: &'static str, strategy: Box<T>) -> &mut Self {
        self.entries.insert(name, strategy);
        self
    }

    pub fn get(&self, name: &str) -> Option<&T> {
        self.entries.get(name).map(|b| b.as_ref())
    }

    pub fn lookup(&self, name: &str) -> Result<&T> {
        self.get(name).ok_or_else(|| {
            Error::invalid(format!(
                "unknown {} '{name}' (available: {})",
                self.kind,
                self.names().join(", ")
            ))
        })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, &T)> {
        self.entries.iter().map(|(k, v)| (*k, v.as_ref()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    trait Greet {
        fn hi(&self) -> String;
    }

    struct Plain;
    impl Greet for Plain {
        fn hi(&self) -> String {
            "hi".into()
        }
    }

    #[test]
    fn lookup_reports_available_names() {
        let mut r: Registry<dyn Greet> = Registry::new("greeter");
        r.register("plain", Box::new(Plain));
        assert_eq!(r.lookup("plain").unwrap().hi(), "hi");
        let err = r.lookup("loud").err().unwrap().to_string();
        assert!(err.contains("unknown greeter 'loud'"), "{err}");
        assert!(err.contains("plain"), "{err}");
    }
}
