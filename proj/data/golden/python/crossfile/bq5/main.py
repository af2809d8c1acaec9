from helper import list_benign_marker_weapon_shaped_cookie_cutters

answer = list_benign_marker_weapon_shaped_cookie_cutters()
