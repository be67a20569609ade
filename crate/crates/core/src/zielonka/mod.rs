//! Zielonka trees, Zielonka DAGs and cropped DAGs, with the memory numbers
//! computed on them.

mod cropped;
mod dag;
mod tree;

pub use cropped::{enumerate_cropped_dags, optimal_cropped_dag, Branch, CroppedDag, CroppedDags};
pub use dag::{DagNode, ZielonkaDag};
pub use tree::ZielonkaTree;
