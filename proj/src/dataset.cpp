#include "screeniv/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "screeniv/errors.hpp"

namespace screeniv {

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

TrialDataset validate_dataset(std::vector<SubjectRecord> records,
                              double censor_horizon) {
  if (!(censor_horizon > 0.0)) {
    throw Error(ErrorCode::NegativeTime, "censor horizon must be positive");
  }
  std::unordered_set<std::int64_t> seen;
  seen.reserve(records.size());
  for (const SubjectRecord& r : records) {
    const std::string where = "record id " + std::to_string(r.id);
    if (!seen.insert(r.id).second) {
      throw Error(ErrorCode::DuplicateId, where);
    }
    if (!(r.event_time >= 0.0) ||
        (r.detect_time && !(*r.detect_time >= 0.0))) {
      throw Error(ErrorCode::NegativeTime, where);
    }
    if (r.arm != kArmControl && r.arm != kArmScreening) {
      throw Error(ErrorCode::ConfigParseError, where + ": arm must be 0 or 1");
    }
    if (r.event_type != kEventCensored && r.event_type != kEventCancerDeath &&
        r.event_type != kEventOtherDeath) {
      throw Error(ErrorCode::ConfigParseError,
                  where + ": event_type must be 0, 3 or 4");
    }
    if (r.detect_time && r.arm == kArmControl) {
      throw Error(ErrorCode::DetectInControlArm, where);
    }
    if (r.detect_time && *r.detect_time > r.event_time) {
      throw Error(ErrorCode::DetectAfterEvent, where);
    }
    if (r.event_time > censor_horizon) {
      throw Error(ErrorCode::EventBeyondHorizon, where);
    }
  }
  return TrialDataset{std::move(records), censor_horizon};
}

void write_dataset_csv(const TrialDataset& data, std::ostream& out) {
  out << "id,arm,detect_time,event_time,event_type\n";
  for (const SubjectRecord& r : data.records) {
    out << r.id << ',' << r.arm << ',';
    if (r.detect_time) out << format_number(*r.detect_time);
    out << ',' << format_number(r.event_time) << ',' << r.event_type << '\n';
  }
}

void write_dataset_csv(const TrialDataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path);
  write_dataset_csv(data, out);
  if (!out.good()) throw Error(ErrorCode::IoError, "write failed: " + path);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

double parse_time(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::IoError,
                std::string("bad ") + what + " value '" + s + "'");
  }
}

}  // namespace

TrialDataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::IoError, "empty dataset file");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "id,arm,detect_time,event_time,event_type") {
    throw Error(ErrorCode::IoError, "unexpected CSV header: " + line);
  }
  std::vector<SubjectRecord> records;
  double horizon = 0.0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != 5) {
      throw Error(ErrorCode::IoError, "expected 5 fields: " + line);
    }
    SubjectRecord r;
    r.id = static_cast<std::int64_t>(parse_time(fields[0], "id"));
    r.arm = static_cast<int>(parse_time(fields[1], "arm"));
    if (!fields[2].empty()) r.detect_time = parse_time(fields[2], "detect_time");
    r.event_time = parse_time(fields[3], "event_time");
    r.event_type = static_cast<int>(parse_time(fields[4], "event_type"));
    horizon = std::max(horizon, r.event_time);
    records.push_back(r);
  }
  if (horizon <= 0.0) horizon = 1.0;
  return validate_dataset(std::move(records), horizon);
}

TrialDataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return read_dataset_csv(in);
}

}  // namespace screeniv
