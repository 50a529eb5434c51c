pub mod decision_space;
pub mod fuzzy;
pub mod goal_model;
pub mod ids;
pub mod model;
pub mod ranking;
pub mod report;
