#ifndef SCREENIV_DATASET_HPP_
#define SCREENIV_DATASET_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace screeniv {

inline constexpr int kArmControl = 0;
inline constexpr int kArmScreening = 1;

inline constexpr int kEventCensored = 0;
inline constexpr int kEventCancerDeath = 3;
inline constexpr int kEventOtherDeath = 4;

// One observed trial row. detect_time is entry to the early-detected state;
// it is absent for control-arm subjects and for never-detected screening
// subjects. detect_time == event_time is legal (detection ordered first).
struct SubjectRecord {
  std::int64_t id = 0;
  int arm = kArmControl;
  std::optional<double> detect_time;
  double event_time = 0.0;
  int event_type = kEventCensored;
};

struct TrialDataset {
  std::vector<SubjectRecord> records;
  double censor_horizon = 0.0;
};

// Returns the dataset iff every record invariant holds; throws Error with the
// first violating record otherwise.
TrialDataset validate_dataset(std::vector<SubjectRecord> records,
                              double censor_horizon);

// CSV contract: header `id,arm,detect_time,event_time,event_type`,
// detect_time empty when absent, event_type in {0,3,4}.
void write_dataset_csv(const TrialDataset& data, std::ostream& out);
void write_dataset_csv(const TrialDataset& data, const std::string& path);

// Reads and validates. The administrative horizon is not stored in the CSV;
// it is inferred as the maximum event time.
TrialDataset read_dataset_csv(std::istream& in);
TrialDataset read_dataset_csv(const std::string& path);

// %.6g formatting used by every CSV writer
std::string format_number(double x);

}  // namespace screeniv

#endif  // SCREENIV_DATASET_HPP_
