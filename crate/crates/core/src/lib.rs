pub mod field;
pub mod gen;
pub mod graph;
pub mod linalg;
pub mod matroid;
pub mod oracles;
pub mod pathmatch;
pub mod updates;
