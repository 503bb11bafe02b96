#include "bayesxg/shots_csv.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "bayesxg/errors.hpp"

namespace bayesxg {

namespace {

constexpr const char* kHeader =
    "competition_id,season_id,match_id,event_index,player,general_position,"
    "position_raw,x,y,distance_to_goal,shot_angle,gk_distance_to_goal,"
    "gk_in_shot_triangle,players_in_shot_triangle,opponents_in_radius,"
    "body_part_raw,body_part,preferred_foot,technique,first_time,one_on_one,"
    "open_goal,under_pressure,play_pattern,goal,statsbomb_xg";

std::string quote_if_needed(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

double parse_double(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(std::string("bad numeric field for ") + what + ": " + s);
  }
}

long long parse_int(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(std::string("bad integer field for ") + what + ": " + s);
  }
}

bool parse_bool(const std::string& s, const char* what) {
  if (s == "0") return false;
  if (s == "1") return true;
  throw ParseError(std::string("bad boolean field for ") + what + ": " + s);
}

}  // namespace

void write_shots_csv(const std::vector<FeatureRow>& rows, std::ostream& out) {
  out << kHeader << '\n';
  out << std::fixed << std::setprecision(6);
  for (const auto& r : rows) {
    out << r.competition_id << ',' << r.season_id << ',' << r.match_id << ','
        << r.event_index << ',' << quote_if_needed(r.player_name) << ','
        << to_label(r.general_position) << ',' << quote_if_needed(r.position_raw)
        << ',' << r.location.x << ',' << r.location.y << ','
        << r.distance_to_goal << ',' << r.shot_angle << ','
        << r.gk_distance_to_goal << ',' << (r.gk_in_shot_triangle ? 1 : 0) << ','
        << r.players_in_shot_triangle << ',' << r.opponents_in_radius << ','
        << to_label(r.body_part_raw) << ',' << to_label(r.body_part) << ','
        << to_label(r.preferred_foot) << ',' << to_label(r.technique) << ','
        << (r.first_time ? 1 : 0) << ',' << (r.one_on_one ? 1 : 0) << ','
        << (r.open_goal ? 1 : 0) << ',' << (r.under_pressure ? 1 : 0) << ','
        << quote_if_needed(r.play_pattern) << ',' << (r.outcome_goal ? 1 : 0)
        << ',' << r.statsbomb_xg << '\n';
  }
}

void write_shots_csv(const std::vector<FeatureRow>& rows,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path.string());
  write_shots_csv(rows, out);
}

std::vector<FeatureRow> read_shots_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty shots CSV");
  {
    auto header = split_csv_line(line);
    auto expected = split_csv_line(kHeader);
    if (header != expected) throw ParseError("unexpected shots CSV header");
  }
  std::vector<FeatureRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto f = split_csv_line(line);
    if (f.size() != 26) {
      throw ParseError("shots CSV line " + std::to_string(line_no) + " has " +
                       std::to_string(f.size()) + " fields, expected 26");
    }
    FeatureRow r;
    r.competition_id = static_cast<int>(parse_int(f[0], "competition_id"));
    r.season_id = static_cast<int>(parse_int(f[1], "season_id"));
    r.match_id = parse_int(f[2], "match_id");
    r.event_index = static_cast<int>(parse_int(f[3], "event_index"));
    r.player_name = f[4];
    r.general_position = position_from_label(f[5]);
    r.position_raw = f[6];
    r.location = {parse_double(f[7], "x"), parse_double(f[8], "y")};
    r.distance_to_goal = parse_double(f[9], "distance_to_goal");
    r.shot_angle = parse_double(f[10], "shot_angle");
    r.gk_distance_to_goal = parse_double(f[11], "gk_distance_to_goal");
    r.gk_in_shot_triangle = parse_bool(f[12], "gk_in_shot_triangle");
    r.players_in_shot_triangle =
        static_cast<int>(parse_int(f[13], "players_in_shot_triangle"));
    r.opponents_in_radius =
        static_cast<int>(parse_int(f[14], "opponents_in_radius"));
    r.body_part_raw = body_part_raw_from_label(f[15]);
    r.body_part = body_part_from_label(f[16]);
    r.preferred_foot = foot_from_label(f[17]);
    r.technique = technique_from_label(f[18]);
    r.first_time = parse_bool(f[19], "first_time");
    r.one_on_one = parse_bool(f[20], "one_on_one");
    r.open_goal = parse_bool(f[21], "open_goal");
    r.under_pressure = parse_bool(f[22], "under_pressure");
    r.play_pattern = f[23];
    r.outcome_goal = parse_bool(f[24], "goal");
    r.statsbomb_xg = parse_double(f[25], "statsbomb_xg");
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<FeatureRow> read_shots_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingFileError(path.string());
  return read_shots_csv(in);
}

}  // namespace bayesxg
