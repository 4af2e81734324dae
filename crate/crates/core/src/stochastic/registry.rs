use crate::error::{param, Result};

pub type Factory<A, T> = Box<dyn Fn(&A) -> Result<Box<T>> + Send + Sync>;

/// Named constructors for one strategy trait. `A` is what a strategy is
/// built from, `T` the trait object it is built into.
pub struct Registry<A, T: ?Sized> {
    entries: Vec<(String, Factory<A, T>)>,
}

impl<A, T: ?Sized> Default for Registry<A, T> {
    fn default() -> Self {
        Registry { entries: Vec::new() }
    }
}

impl<A, T: ?Sized> Registry<A, T> {
    /// Registers `factory` under `name`, replacing an existing entry.
    pub fn register(&mut self, name: &str, factory: Factory<A, T>) {
        match self.entries.iter_mut().find(|(n, _)| n == name) {
            Some(entry) => entry.1 = factory,
            None => self.entries.push((name.to_string(), factory)),
        }
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.iter().map(|(n, _)| n.as_str()).collect()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.iter().any(|(n, _)| n == name)
    }

    pub fn build(&self, name: &str, args: &A) -> Result<Box<T>> {
        match self.entries.iter().find(|(n, _)| n == name) {
            Some((_, f)) => f(args),
            None => Err(param(format!("unknown strategy '{name}', expected one of {:?}", self.names()))),
        }
    }
}
