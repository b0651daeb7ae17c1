use std::str::FromStr;

use rsup_core::{EventId, Generator, Result, StateId};

/// A state given either by index (`#12`) or by a witness event string from
/// the initial state (`11,30,11`; empty for the initial state itself).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StateAddress {
    Index(StateId),
    Witness(Vec<EventId>),
}

impl StateAddress {
    pub fn locate(&self, g: &Generator) -> Result<StateId> {
        match self {
            StateAddress::Index(q) => {
                g.check_state(*q)?;
                Ok(*q)
            }
            StateAddress::Witness(word) => g.locate(word),
        }
    }
}

impl FromStr for StateAddress {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if let Some(index) = s.strip_prefix('#') {
            return index
                .parse()
                .map(StateAddress::Index)
                .map_err(|_| format!("bad state index `{index}`"));
        }
        if s.is_empty() {
            return Ok(StateAddress::Witness(Vec::new()));
        }
        s.split([',', ' '])
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<u32>().map(EventId).map_err(|_| format!("bad event id `{t}`")))
            .collect::<Result<Vec<_>, _>>()
            .map(StateAddress::Witness)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_forms() {
        assert_eq!("#7".parse(), Ok(StateAddress::Index(7)));
        assert_eq!("".parse(), Ok(StateAddress::Witness(vec![])));
        assert_eq!("11,30 31".parse(), Ok(StateAddress::Witness(vec![EventId(11), EventId(30), EventId(31)])));
        assert!("11,x".parse::<StateAddress>().is_err());
        assert!("#x".parse::<StateAddress>().is_err());
    }
}
