#ifndef MESHGRADE_GRAPH_HPP
#define MESHGRADE_GRAPH_HPP

#include <string>
#include <vector>

#include "meshgrade/mesh.hpp"

namespace meshgrade {

// Scratch buffers for repeated frontier walks; reusing one across calls
// avoids clearing the stamp array each time.
struct FrontierWorkspace {
  std::vector<std::vector<int>> levels;  // internal vertex indices per k
  std::vector<int> stamps;
  int counter = 0;
};

// Element adjacency: vertices are element ids, an edge joins two elements
// sharing at least one node. Immutable after construction.
class NeighbourhoodGraph {
 public:
  NeighbourhoodGraph(std::vector<int> vertex_ids, std::vector<int> offsets,
                     std::vector<int> neighbours);

  std::size_t vertex_count() const { return vertex_ids_.size(); }
  const std::vector<int>& vertex_ids() const { return vertex_ids_; }

  // Internal index of an element id; vertex_ids_ is ascending, so internal
  // order and id order agree. Throws on unknown ids.
  int index_of(int element_id) const;
  int id_of(int index) const { return vertex_ids_[index]; }

  // Sorted neighbour element ids.
  std::vector<int> neighbours(int element_id) const;

  // Sorted element ids of nh^k(v) resp. front^k(v); front^0(v) = {v}.
  std::vector<int> k_ring(int element_id, int k) const;
  std::vector<int> frontier(int element_id, int k) const;

  // Fills ws.levels[k] with front^k as internal indices for k = 0..max_k,
  // in breadth-first discovery order.
  void frontiers_into(int start_index, int max_k, FrontierWorkspace& ws) const;

  // Neighbour index range of one vertex, for tight per-element loops.
  const int* adjacency_begin(int index) const {
    return neighbours_.data() + offsets_[index];
  }
  const int* adjacency_end(int index) const {
    return neighbours_.data() + offsets_[index + 1];
  }

 private:
  std::vector<int> vertex_ids_;  // ascending
  std::vector<int> offsets_;     // size vertex_count + 1
  std::vector<int> neighbours_;  // internal indices, ascending per vertex
};

// Uses a node -> incident-elements index; no pairwise scan.
NeighbourhoodGraph build_graph(const Mesh& mesh);

// One line per vertex: "element_id: n1 n2 ...", ids ascending.
std::string adjacency_dump(const NeighbourhoodGraph& graph);

}  // namespace meshgrade

#endif
