#pragma once

#define POLAR_TOOLKIT_VERSION "0.1.0"
