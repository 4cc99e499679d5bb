#pragma once

#define TALG_VERSION_MAJOR 0
#define TALG_VERSION_MINOR 1
#define TALG_VERSION_PATCH 0
#define TALG_VERSION_STRING "0.1.0"
