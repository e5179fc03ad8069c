//! Bundled example problems.

use std::thread;

use crate::error::CliError;
use crate::problem::{parse_problem_with_order, LeviFactor, ProblemSpec};
use crate::report::Report;
use crate::run::{apply_overrides, run, Command};
use jetnorm_core::normalform::Scheduler;
use jetnorm_core::scalar::Scalar;

pub struct CorpusEntry {
    pub name: &'static str,
    pub command: Command,
    pub text: &'static str,
}

macro_rules! entry {
    ($name:literal, $cmd:expr) => {
        CorpusEntry {
            name: $name,
            command: $cmd,
            text: include_str!(concat!("../corpus/", $name, ".toml")),
        }
    };
}

/// All entries, sorted by name.
pub fn entries() -> &'static [CorpusEntry] {
    static ENTRIES: &[CorpusEntry] = &[
        entry!("abelian-x2", Command::Linearize),
        entry!("algebroid-x2", Command::Algebroid),
        entry!("gl2-levi", Command::Levi),
        entry!("guillemin-sternberg-action", Command::Linearize),
        entry!("sl2-linear", Command::Linearize),
        entry!("so3-action-algebroid", Command::Algebroid),
        entry!("so3-linear", Command::Linearize),
        entry!("weinstein-sl2-flat", Command::Linearize),
        entry!("x2-action", Command::Linearize),
    ];
    ENTRIES
}

pub fn find(name: &str) -> Option<&'static CorpusEntry> {
    entries().iter().find(|e| e.name == name)
}

/// Flags that override the stored problem settings.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub scheduler: Option<Scheduler>,
    pub max_degree: Option<u32>,
    pub radius: Option<Scalar>,
    pub levi: Option<LeviFactor>,
}

impl CorpusEntry {
    pub fn spec(&self, order: Option<u32>) -> Result<ProblemSpec, CliError> {
        parse_problem_with_order(self.text, order)
    }

    pub fn run(&self, o: &Overrides) -> Result<Report, CliError> {
        let mut spec = self.spec(o.max_degree)?;
        apply_overrides(&mut spec, o.scheduler, o.radius.clone(), o.levi.clone());
        run(self.command, &spec)
    }
}

/// Runs every entry on its own thread; results are ordered by name.
pub fn run_all(o: &Overrides) -> Vec<(&'static str, Result<Report, CliError>)> {
    thread::scope(|s| {
        let handles: Vec<_> = entries()
            .iter()
            .map(|e| (e.name, s.spawn(move || e.run(o))))
            .collect();
        handles
            .into_iter()
            .map(|(name, h)| (name, h.join().expect("corpus worker panicked")))
            .collect()
    })
}
