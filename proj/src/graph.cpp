#include "meshgrade/graph.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "meshgrade/error.hpp"

namespace meshgrade {

NeighbourhoodGraph::NeighbourhoodGraph(std::vector<int> vertex_ids,
                                       std::vector<int> offsets,
                                       std::vector<int> neighbours)
    : vertex_ids_(std::move(vertex_ids)),
      offsets_(std::move(offsets)),
      neighbours_(std::move(neighbours)) {}

int NeighbourhoodGraph::index_of(int element_id) const {
  auto it =
      std::lower_bound(vertex_ids_.begin(), vertex_ids_.end(), element_id);
  if (it == vertex_ids_.end() || *it != element_id) {
    throw Error("unknown element id " + std::to_string(element_id));
  }
  return static_cast<int>(it - vertex_ids_.begin());
}

std::vector<int> NeighbourhoodGraph::neighbours(int element_id) const {
  const int v = index_of(element_id);
  std::vector<int> ids;
  ids.reserve(offsets_[v + 1] - offsets_[v]);
  for (const int* it = adjacency_begin(v); it != adjacency_end(v); ++it) {
    ids.push_back(vertex_ids_[*it]);  // index order == id order
  }
  return ids;
}

void NeighbourhoodGraph::frontiers_into(int start_index, int max_k,
                                        FrontierWorkspace& ws) const {
  ws.levels.resize(static_cast<std::size_t>(max_k) + 1);
  for (auto& level : ws.levels) level.clear();
  ws.stamps.resize(vertex_count(), 0);
  const int stamp = ++ws.counter;

  ws.stamps[start_index] = stamp;
  ws.levels[0].push_back(start_index);
  for (int k = 1; k <= max_k; ++k) {
    for (int u : ws.levels[k - 1]) {
      for (const int* it = adjacency_begin(u); it != adjacency_end(u); ++it) {
        if (ws.stamps[*it] != stamp) {
          ws.stamps[*it] = stamp;
          ws.levels[k].push_back(*it);
        }
      }
    }
    if (ws.levels[k].empty()) break;  // later frontiers stay empty
  }
}

std::vector<int> NeighbourhoodGraph::k_ring(int element_id, int k) const {
  if (k < 0) throw Error("k must be non-negative");
  FrontierWorkspace ws;
  frontiers_into(index_of(element_id), k, ws);
  std::vector<int> ids;
  for (const auto& level : ws.levels) {
    for (int index : level) ids.push_back(vertex_ids_[index]);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::vector<int> NeighbourhoodGraph::frontier(int element_id, int k) const {
  if (k < 0) throw Error("k must be non-negative");
  FrontierWorkspace ws;
  frontiers_into(index_of(element_id), k, ws);
  std::vector<int> ids;
  if (k < static_cast<int>(ws.levels.size())) {
    for (int index : ws.levels[k]) ids.push_back(vertex_ids_[index]);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

NeighbourhoodGraph build_graph(const Mesh& mesh) {
  std::vector<int> ids;
  ids.reserve(mesh.elements().size());
  for (const Element& element : mesh.elements()) ids.push_back(element.id);
  std::sort(ids.begin(), ids.end());

  const int n = static_cast<int>(ids.size());
  std::unordered_map<int, std::vector<int>> incident;  // node id -> vertices
  incident.reserve(mesh.nodes().size() * 2);
  for (int v = 0; v < n; ++v) {
    for (int node_id : mesh.element(ids[v]).node_ids) {
      incident[node_id].push_back(v);
    }
  }

  std::vector<int> offsets(n + 1, 0);
  std::vector<int> neighbours;
  neighbours.reserve(ids.size() * 8);
  std::vector<int> stamps(n, -1);
  std::vector<int> scratch;
  for (int v = 0; v < n; ++v) {
    scratch.clear();
    for (int node_id : mesh.element(ids[v]).node_ids) {
      for (int w : incident[node_id]) {
        if (w != v && stamps[w] != v) {
          stamps[w] = v;
          scratch.push_back(w);
        }
      }
    }
    std::sort(scratch.begin(), scratch.end());
    neighbours.insert(neighbours.end(), scratch.begin(), scratch.end());
    offsets[v + 1] = static_cast<int>(neighbours.size());
  }

  return NeighbourhoodGraph(std::move(ids), std::move(offsets),
                            std::move(neighbours));
}

std::string adjacency_dump(const NeighbourhoodGraph& graph) {
  std::ostringstream out;
  for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
    out << graph.vertex_ids()[v] << ':';
    const int index = static_cast<int>(v);
    for (const int* it = graph.adjacency_begin(index);
         it != graph.adjacency_end(index); ++it) {
      out << ' ' << graph.id_of(*it);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace meshgrade
