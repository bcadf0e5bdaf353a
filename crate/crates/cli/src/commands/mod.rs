mod assess;
mod code_notes;
mod cv;
mod design;
mod predict;
mod select;
mod synth;
mod train;

pub use assess::cmd_assess;
pub use code_notes::cmd_code_notes;
pub use cv::cmd_cv;
pub use design::cmd_design;
pub use predict::cmd_predict;
pub use select::cmd_select;
pub use synth::cmd_synth;
pub use train::cmd_train;
