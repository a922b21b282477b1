pub mod exact;
pub mod poly;
pub mod screws;
pub mod topology;
pub mod model;
pub mod modelfile;
pub mod fixtures;
