use std::collections::HashMap;

use crate::graph::EdgeKey;
use crate::palette::Colour;

/// An edge → colour assignment.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Colouring {
    colours: HashMap<EdgeKey, Colour>,
}

impl Colouring {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, e: EdgeKey, c: Colour) -> Option<Colour> {
        self.colours.insert(e, c)
    }

    pub fn get(&self, e: EdgeKey) -> Option<Colour> {
        self.colours.get(&e).copied()
    }

    pub fn len(&self) -> usize {
        self.colours.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colours.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (EdgeKey, Colour)> + '_ {
        self.colours.iter().map(|(&e, &c)| (e, c))
    }

    pub fn max_colour(&self) -> Option<Colour> {
        self.colours.values().copied().max()
    }

    pub fn distinct_colours(&self) -> usize {
        let mut seen: Vec<Colour> = self.colours.values().copied().collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }
}

impl FromIterator<(EdgeKey, Colour)> for Colouring {
    fn from_iter<T: IntoIterator<Item = (EdgeKey, Colour)>>(iter: T) -> Self {
        Self {
            colours: iter.into_iter().collect(),
        }
    }
}
