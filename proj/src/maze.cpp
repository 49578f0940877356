#include "msn/maze.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <fstream>
#include <limits>
#include <sstream>

namespace msn::maze {

Coord moved(Coord from, Direction dir) {
  switch (dir) {
    case Direction::north: return {from.x, from.y - 1};
    case Direction::east: return {from.x + 1, from.y};
    case Direction::south: return {from.x, from.y + 1};
    case Direction::west: return {from.x - 1, from.y};
  }
  return from;
}

namespace {

bool road_path_exists(const MazeWorld& world, Coord from, Coord to) {
  std::vector<char> seen(world.width * world.height, 0);
  std::deque<Coord> queue{from};
  seen[from.y * world.width + from.x] = 1;
  while (!queue.empty()) {
    const Coord c = queue.front();
    queue.pop_front();
    if (c == to) return true;
    for (Direction d : kDirections) {
      const Coord n = moved(c, d);
      if (!world.is_road(n)) continue;
      char& mark = seen[n.y * world.width + n.x];
      if (mark) continue;
      mark = 1;
      queue.push_back(n);
    }
  }
  return false;
}

}  // namespace

MazeWorld MazeWorld::parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("maze: empty input");

  MazeWorld world;
  {
    std::istringstream header(line);
    if (!(header >> world.width >> world.height) || world.width <= 0 ||
        world.height <= 0)
      throw std::runtime_error("maze: header must be 'WIDTH HEIGHT'");
  }

  world.cells.assign(static_cast<std::size_t>(world.width) * world.height,
                     Cell::wall);
  int entries = 0;
  int exits = 0;
  for (int y = 0; y < world.height; ++y) {
    if (!std::getline(in, line))
      throw std::runtime_error("maze: expected " + std::to_string(world.height) +
                               " rows, got " + std::to_string(y));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (static_cast<int>(line.size()) != world.width)
      throw std::runtime_error("maze row " + std::to_string(y + 1) +
                               ": expected " + std::to_string(world.width) +
                               " characters");
    for (int x = 0; x < world.width; ++x) {
      const Coord c{x, y};
      switch (line[x]) {
        case '#': break;
        case '.': world.cells[y * world.width + x] = Cell::road; break;
        case 'S':
          world.cells[y * world.width + x] = Cell::road;
          world.entry = c;
          ++entries;
          break;
        case 'E':
          world.cells[y * world.width + x] = Cell::road;
          world.exit = c;
          ++exits;
          break;
        default:
          throw std::runtime_error("maze row " + std::to_string(y + 1) +
                                   ": invalid character '" +
                                   std::string(1, line[x]) + "'");
      }
    }
  }
  if (entries != 1 || exits != 1)
    throw std::runtime_error("maze: exactly one S and one E required");
  if (!road_path_exists(world, world.entry, world.exit))
    throw std::runtime_error("maze: unsolvable, no road path from S to E");
  return world;
}

MazeWorld MazeWorld::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("maze: cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

std::string MazeWorld::to_text() const {
  std::ostringstream out;
  out << width << ' ' << height << '\n';
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const Coord c{x, y};
      char ch = at(c) == Cell::wall ? '#' : '.';
      if (c == entry) ch = 'S';
      if (c == exit) ch = 'E';
      out << ch;
    }
    out << '\n';
  }
  return out.str();
}

int KnownMap::known_count() const {
  int count = 0;
  for (Knowledge k : cells)
    if (k != Knowledge::unknown) ++count;
  return count;
}

std::vector<Coord> sense(const MazeWorld& world, AgentState& agent) {
  std::vector<Coord> revealed;
  auto reveal = [&](Coord c) {
    if (!world.in_bounds(c)) return;  // beyond the grid always reads as wall
    if (agent.known.at(c) != Knowledge::unknown) return;
    agent.known.set(c, world.at(c) == Cell::road ? Knowledge::road
                                                 : Knowledge::wall);
    revealed.push_back(c);
  };
  reveal(agent.position);
  for (Direction d : kDirections) reveal(moved(agent.position, d));
  return revealed;
}

bool in_contact(const AgentState& a, const AgentState& b) {
  const bool a_interested = std::find(a.interests.begin(), a.interests.end(),
                                      kMazeInterest) != a.interests.end();
  const bool b_interested = std::find(b.interests.begin(), b.interests.end(),
                                      kMazeInterest) != b.interests.end();
  if (!a_interested || !b_interested) return false;
  const int range = std::min(a.radio_range, b.radio_range);
  const int chebyshev = std::max(std::abs(a.position.x - b.position.x),
                                 std::abs(a.position.y - b.position.y));
  return chebyshev <= range;
}

std::vector<std::pair<std::size_t, std::size_t>> broadcast_discover(
    const std::vector<AgentState>& agents) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < agents.size(); ++i)
    for (std::size_t j = i + 1; j < agents.size(); ++j)
      if (in_contact(agents[i], agents[j])) pairs.emplace_back(i, j);
  return pairs;
}

void merge_into(KnownMap& dst, const KnownMap& src, std::optional<int> cap) {
  if (dst.width != src.width || dst.height != src.height)
    throw std::invalid_argument("merge: map dimensions differ");
  int copied = 0;
  for (std::size_t idx = 0; idx < src.cells.size(); ++idx) {
    const Knowledge theirs = src.cells[idx];
    if (theirs == Knowledge::unknown) continue;
    const Knowledge ours = dst.cells[idx];
    if (ours == theirs) continue;
    if (ours != Knowledge::unknown)
      throw MergeConflictError("merge: maps disagree at cell " +
                               std::to_string(idx));
    if (cap && copied >= *cap) continue;
    dst.cells[idx] = theirs;
    ++copied;
  }
}

KnownMap merge_maps(const KnownMap& a, const KnownMap& b) {
  KnownMap out = a;
  merge_into(out, b);
  return out;
}

namespace {

constexpr int kUnreachable = std::numeric_limits<int>::max();

// Breadth-first distance-to-target field over known road cells, seeded
// either from the exit or from every frontier cell. Traversal never passes
// through unknown or wall cells; frontier seeds only feed adjacent known
// roads.
std::vector<int> distance_field(const KnownMap& known,
                                const std::vector<Coord>& sources) {
  std::vector<int> dist(known.cells.size(), kUnreachable);
  std::deque<Coord> queue;
  for (Coord s : sources) {
    dist[s.y * known.width + s.x] = 0;
    queue.push_back(s);
  }
  while (!queue.empty()) {
    const Coord c = queue.front();
    queue.pop_front();
    const int d = dist[c.y * known.width + c.x];
    for (Direction dir : kDirections) {
      const Coord n = moved(c, dir);
      if (known.at(n) != Knowledge::road) continue;
      int& slot = dist[n.y * known.width + n.x];
      if (slot != kUnreachable) continue;
      slot = d + 1;
      queue.push_back(n);
    }
  }
  return dist;
}

std::optional<Direction> first_move(const KnownMap& known, Coord pos,
                                    const std::vector<int>& dist) {
  const int here = dist[pos.y * known.width + pos.x];
  if (here == kUnreachable || here == 0) return std::nullopt;
  for (Direction dir : kDirections) {
    const Coord n = moved(pos, dir);
    if (n.x < 0 || n.x >= known.width || n.y < 0 || n.y >= known.height) continue;
    if (known.at(n) == Knowledge::wall) continue;
    if (dist[n.y * known.width + n.x] == here - 1) return dir;
  }
  return std::nullopt;
}

}  // namespace

Direction plan_step(const AgentState& agent, std::optional<Coord> exit_hint) {
  assert(!agent.escaped);
  const KnownMap& known = agent.known;

  if (exit_hint && known.at(*exit_hint) == Knowledge::road) {
    assert(!(agent.position == *exit_hint));
    const auto dist = distance_field(known, {*exit_hint});
    if (auto dir = first_move(known, agent.position, dist)) return *dir;
  }

  // No known route to the exit yet: explore. Adjacent cells are sensed
  // before planning, so the road/wall state of every candidate is the
  // agent's own observation regardless of what has been merged in.
  for (Direction dir : kDirections) {
    const Coord n = moved(agent.position, dir);
    if (known.at(n) == Knowledge::road && !agent.has_visited(n, known.width))
      return dir;
  }

  // Dead end of the walk: retreat one cell along the trail.
  if (!agent.trail.empty()) {
    const Coord back = agent.trail.back();
    for (Direction dir : kDirections)
      if (moved(agent.position, dir) == back) return dir;
  }
  throw TrappedError("plan_step: no exit path and nowhere left to explore");
}

void Archive::put(const KnownMap& map) {
  if (mode_ != ArchiveMode::archive) return;  // volatile-only network
  if (stored_)
    merge_into(*stored_, map);
  else
    stored_ = map;
}

MazeSim::MazeSim(const MazeWorld& world, std::vector<AgentState> agents,
                 Archive& archive, MazeRunOptions options)
    : world_(world), agents_(std::move(agents)), archive_(archive),
      options_(options) {
  std::sort(agents_.begin(), agents_.end(),
            [](const AgentState& a, const AgentState& b) { return a.id < b.id; });
  for (const AgentState& agent : agents_) {
    if (!world_.is_road(agent.position))
      throw std::invalid_argument("maze: agent start is not a road cell");
    if (agent.entry_step < 0)
      throw std::invalid_argument("maze: entry_step must be >= 0");
  }
}

void MazeSim::enter(AgentState& agent) {
  agent.entered = true;
  agent.known = KnownMap(world_.width, world_.height);
  agent.known.set(agent.position, Knowledge::road);
  agent.visited.assign(static_cast<std::size_t>(world_.width) * world_.height, 0);
  agent.visited[agent.position.y * world_.width + agent.position.x] = 1;
  agent.trail.clear();
  if (auto stored = archive_.get()) merge_into(agent.known, *stored);
}

void MazeSim::escape(AgentState& agent) {
  agent.escaped = true;
  escape_order_.push_back(agent.id);
  archive_.put(agent.known);
}

bool MazeSim::step() {
  for (AgentState& agent : agents_) {
    if (agent.escaped) continue;
    if (!agent.entered) {
      if (steps_elapsed_ < agent.entry_step) continue;
      enter(agent);
    }

    sense(world_, agent);
    if (agent.position == world_.exit) {
      escape(agent);
      continue;
    }

    if (options_.sharing) {
      for (AgentState& other : agents_) {
        if (other.id == agent.id || !other.active()) continue;
        if (!in_contact(agent, other)) continue;
        merge_into(agent.known, other.known, options_.exchange_cap);
        merge_into(other.known, agent.known, options_.exchange_cap);
      }
    }

    const Direction dir = plan_step(agent, world_.exit);
    const Coord from = agent.position;
    agent.position = moved(from, dir);
    assert(world_.is_road(agent.position));
    agent.known.set(agent.position, Knowledge::road);
    if (!agent.trail.empty() && agent.position == agent.trail.back())
      agent.trail.pop_back();  // backtracking move
    else
      agent.trail.push_back(from);
    agent.visited[agent.position.y * world_.width + agent.position.x] = 1;
    ++agent.steps_taken;
    if (agent.position == world_.exit) escape(agent);
  }
  ++steps_elapsed_;
  return !all_escaped();
}

bool MazeSim::all_escaped() const {
  return std::all_of(agents_.begin(), agents_.end(),
                     [](const AgentState& a) { return a.escaped; });
}

MazeReport MazeSim::report() const {
  MazeReport out;
  out.agents.reserve(agents_.size());
  for (const AgentState& agent : agents_) {
    out.agents.push_back(AgentReport{agent.id, agent.entry_step,
                                     agent.steps_taken, agent.escaped});
    out.final_maps.push_back(agent.known);
  }
  out.escape_order = escape_order_;
  return out;
}

MazeReport run_maze(const MazeWorld& world, std::vector<AgentState> agents,
                    Archive& archive, int max_steps, MazeRunOptions options) {
  if (max_steps < 1) throw std::invalid_argument("run_maze: max_steps must be >= 1");
  MazeSim sim(world, std::move(agents), archive, options);
  while (sim.steps_elapsed() < max_steps && sim.step()) {
  }
  return sim.report();
}

}  // namespace msn::maze
