#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "msn/social.hpp"

// Cooperative maze scenario: agents with local wall sensing explore a
// road/wall grid, discover peers by profile broadcast within radio range,
// merge partial maps on contact, optionally publish maps to a shared
// archive, and navigate to the exit.

namespace msn::maze {

struct Coord {
  int x = 0;
  int y = 0;
  bool operator==(const Coord&) const = default;
};

enum class Cell : std::uint8_t { road, wall };
enum class Knowledge : std::uint8_t { unknown, road, wall };

enum class Direction { north, east, south, west };

/// The four moves in tie-break order N, E, S, W.
inline constexpr Direction kDirections[4] = {Direction::north, Direction::east,
                                             Direction::south, Direction::west};

Coord moved(Coord from, Direction dir);

/// Ground-truth grid. Entry and exit are distinct road cells with a road
/// path between them, validated at load.
struct MazeWorld {
  int width = 0;
  int height = 0;
  std::vector<Cell> cells;  // row-major
  Coord entry;
  Coord exit;

  bool in_bounds(Coord c) const {
    return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height;
  }
  Cell at(Coord c) const { return cells[c.y * width + c.x]; }
  bool is_road(Coord c) const { return in_bounds(c) && at(c) == Cell::road; }

  /// Parses the text format: first line "WIDTH HEIGHT", then HEIGHT rows
  /// of WIDTH characters from {#, ., S, E}. Throws on format errors,
  /// duplicate/missing S or E, or an unsolvable maze.
  static MazeWorld parse(const std::string& text);
  static MazeWorld load(const std::string& path);
  std::string to_text() const;
};

/// One agent's partial knowledge of the grid. Coordinates outside the
/// grid read as wall.
struct KnownMap {
  int width = 0;
  int height = 0;
  std::vector<Knowledge> cells;

  KnownMap() = default;
  KnownMap(int w, int h) : width(w), height(h), cells(w * h, Knowledge::unknown) {}

  Knowledge at(Coord c) const {
    if (c.x < 0 || c.x >= width || c.y < 0 || c.y >= height)
      return Knowledge::wall;
    return cells[c.y * width + c.x];
  }
  void set(Coord c, Knowledge k) { cells[c.y * width + c.x] = k; }
  int known_count() const;
};

struct MergeConflictError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TrappedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Interest id that marks a machine as a maze solver.
inline constexpr int kMazeInterest = 0;

struct AgentState {
  MachineId id = 0;
  Coord position;
  KnownMap known;
  std::vector<int> interests{kMazeInterest};
  int radio_range = 2;  // Chebyshev cell distance
  int entry_step = 0;
  int steps_taken = 0;
  bool entered = false;
  bool escaped = false;
  // Exploration trail: cells this agent has occupied plus the walk stack
  // back to its start. Drives exploration independently of merged
  // knowledge, which is what makes map sharing never hurt an agent.
  std::vector<char> visited;  // row-major over the grid; empty = none yet
  std::vector<Coord> trail;

  bool active() const { return entered && !escaped; }
  bool has_visited(Coord c, int width) const {
    return !visited.empty() && visited[c.y * width + c.x] != 0;
  }
};

/// Reveals the agent's current cell and its 4-neighborhood into
/// agent.known; returns the coordinates that were newly revealed.
std::vector<Coord> sense(const MazeWorld& world, AgentState& agent);

/// True when both agents hold the maze interest and sit within
/// min(range_a, range_b) Chebyshev distance of each other.
bool in_contact(const AgentState& a, const AgentState& b);

/// Unordered index pairs (i < j) of agents currently in mutual contact.
std::vector<std::pair<std::size_t, std::size_t>> broadcast_discover(
    const std::vector<AgentState>& agents);

/// Copies knowledge from src into dst, cell-wise: known beats unknown.
/// At most `cap` newly informative cells are copied (row-major order)
/// when a cap is given. Throws MergeConflictError when the maps disagree
/// on a known cell.
void merge_into(KnownMap& dst, const KnownMap& src,
                std::optional<int> cap = std::nullopt);

/// Cell-wise union of two maps of equal dimensions.
KnownMap merge_maps(const KnownMap& a, const KnownMap& b);

/// First move of a shortest known-road path to the exit when one exists
/// (ties broken N, E, S, W). Otherwise explores: steps to an adjacent
/// unvisited road (same preference order) or backtracks along the walk
/// trail. Exploration ignores merged knowledge, so shared maps can only
/// accelerate the switch to the exit path, never redirect the search.
/// Throws TrappedError when no move remains.
Direction plan_step(const AgentState& agent, std::optional<Coord> exit_hint);

enum class ArchiveMode { archive, non_archive };

/// Shared storage. Writes merge into the stored map in archive mode and
/// are dropped otherwise.
class Archive {
 public:
  explicit Archive(ArchiveMode mode) : mode_(mode) {}

  ArchiveMode mode() const { return mode_; }
  void put(const KnownMap& map);
  std::optional<KnownMap> get() const { return stored_; }

 private:
  ArchiveMode mode_;
  std::optional<KnownMap> stored_;
};

struct MazeRunOptions {
  bool sharing = true;
  std::optional<int> exchange_cap;  // cells per contact direction; nullopt = unlimited
};

struct AgentReport {
  MachineId id = 0;
  int entry_step = 0;
  int steps_taken = 0;
  bool escaped = false;
};

struct MazeReport {
  std::vector<AgentReport> agents;
  std::vector<MachineId> escape_order;
  std::vector<KnownMap> final_maps;  // parallel to agents
};

/// Steppable simulation; run_maze is the plain loop over it. Per global
/// step, agents act in id order: sense, discover-and-merge, plan, move.
/// Agents read the archive when they enter and write to it when they
/// escape; escaped agents leave the world.
class MazeSim {
 public:
  MazeSim(const MazeWorld& world, std::vector<AgentState> agents,
          Archive& archive, MazeRunOptions options = {});

  /// Advances one global step. Returns false once every agent escaped.
  bool step();

  int steps_elapsed() const { return steps_elapsed_; }
  bool all_escaped() const;
  const std::vector<AgentState>& agents() const { return agents_; }
  MazeReport report() const;

 private:
  void enter(AgentState& agent);
  void escape(AgentState& agent);

  const MazeWorld& world_;
  std::vector<AgentState> agents_;
  Archive& archive_;
  MazeRunOptions options_;
  std::vector<MachineId> escape_order_;
  int steps_elapsed_ = 0;
};

MazeReport run_maze(const MazeWorld& world, std::vector<AgentState> agents,
                    Archive& archive, int max_steps, MazeRunOptions options = {});

}  // namespace msn::maze
