//! Model checking for epistemic logic with public, group and coalition
//! announcements.

pub mod checker;
pub mod formula;
pub mod model;
pub mod parser;
pub mod translate;
pub mod validity;

pub use checker::{CheckError, Checker, PointedModel, Witness, WitnessReport};
pub use formula::{Agent, Formula, Group, GroupKnowledgeFormula, NecessityForm, Stratum};
pub use model::{EpistemicModel, ModelError, StateSet};
pub use parser::{
    parse_formula, parse_model, render_formula, render_model, ModelDocument, ParseError,
};
pub use translate::{pal_to_el, TranslateError};
