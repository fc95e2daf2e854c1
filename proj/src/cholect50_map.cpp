#include "ivteval/label_space.hpp"

namespace ivt {
namespace {

// Triplet dictionary of the CholecT45/CholecT50 release. Ids 94-99 are the
// instrument-only (null verb, null target) classes.
constexpr std::string_view kCholecT50Map = R"(# CholecT50 triplet map
# triplet_id,instrument_id,verb_id,target_id
0,0,2,1
1,0,2,0
2,0,2,10
3,0,0,3
4,0,0,2
5,0,0,4
6,0,0,1
7,0,0,0
8,0,0,12
9,0,0,8
10,0,0,10
11,0,0,11
12,0,0,13
13,0,8,0
14,0,1,2
15,0,1,4
16,0,1,1
17,0,1,0
18,0,1,12
19,0,1,8
20,0,1,10
21,0,1,11
22,1,3,7
23,1,3,5
24,1,3,3
25,1,3,2
26,1,3,4
27,1,3,1
28,1,3,0
29,1,3,8
30,1,3,10
31,1,3,11
32,1,2,9
33,1,2,3
34,1,2,2
35,1,2,1
36,1,2,0
37,1,2,10
38,1,0,1
39,1,0,8
40,1,0,13
41,1,1,2
42,1,1,4
43,1,1,0
44,1,1,8
45,1,1,10
46,2,3,5
47,2,3,3
48,2,3,2
49,2,3,4
50,2,3,1
51,2,3,0
52,2,3,8
53,2,3,10
54,2,5,5
55,2,5,11
56,2,2,5
57,2,2,3
58,2,2,2
59,2,2,1
60,2,2,0
61,2,2,10
62,2,2,11
63,2,1,0
64,2,1,8
65,3,3,10
66,3,5,9
67,3,5,5
68,3,5,3
69,3,5,2
70,3,5,1
71,3,5,8
72,3,5,10
73,3,5,11
74,3,2,1
75,3,2,0
76,3,2,10
77,4,4,5
78,4,4,3
79,4,4,2
80,4,4,4
81,4,4,1
82,5,6,6
83,5,2,2
84,5,2,4
85,5,2,1
86,5,2,0
87,5,2,10
88,5,7,7
89,5,7,4
90,5,7,8
91,5,1,0
92,5,1,8
93,5,1,10
94,0,9,14
95,1,9,14
96,2,9,14
97,3,9,14
98,4,9,14
99,5,9,14
)";

}  // namespace

std::string_view cholect50_map_document() { return kCholecT50Map; }

const ClassNames& cholect50_class_names() {
  static const ClassNames names{
      {"grasper", "bipolar", "hook", "scissors", "clipper", "irrigator"},
      {"grasp", "retract", "dissect", "coagulate", "clip", "cut", "aspirate",
       "irrigate", "pack", "null_verb"},
      {"gallbladder", "cystic_plate", "cystic_duct", "cystic_artery",
       "cystic_pedicle", "blood_vessel", "fluid", "abdominal_wall_cavity",
       "liver", "adhesion", "omentum", "peritoneum", "gut", "specimen_bag",
       "null_target"},
  };
  return names;
}

const ComponentMap& ComponentMap::cholect50() {
  static const ComponentMap map =
      ComponentMap::parse(kCholecT50Map, LabelSpaceSizes{100, 6, 10, 15});
  return map;
}

}  // namespace ivt
