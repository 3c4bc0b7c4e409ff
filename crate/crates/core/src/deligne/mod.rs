mod cells;
mod nerve;

pub use cells::{
    compose_one, hcompose, hinverse, is_one_automorphism, is_two_automorphism, two_cell_target, vcompose, vinverse,
    DelObject, DelOneCell, DelTwoCell,
};
pub use nerve::{
    edge_condition, nerve_horn_fill, tetra_condition, triangle_condition, Edges, Fillers, Horn, NerveSimplex,
};
